#include <CLI11.hpp>
#include <iostream>

#include "octopus/cli.hpp"

using namespace octopus::cli;

int main(int argc, char** argv) {
  CLI::App app{"CXL pod topology, cost and allocation toolkit"};
  app.require_subcommand(1);

  DesignOptions design;
  auto* design_cmd = app.add_subcommand("design", "Construct a pod topology (JSON or DOT)");
  design_cmd->add_option("--kind", design.kind, "symmetric | regular | dense")->capture_default_str();
  design_cmd->add_option("-X,--host-ports", design.host_ports,
                         "CXL ports per host (MHD count for symmetric)")->required();
  design_cmd->add_option("-N,--mhd-ports", design.mhd_ports,
                         "ports per MHD (host count for symmetric)")->required();
  design_cmd->add_option("--lambda", design.lambda, "pair coverage for dense designs");
  design_cmd->add_option("--multiplicity", design.multiplicity, "parallel cables per edge")
      ->capture_default_str();
  design_cmd->add_option("--format", design.format, "json | dot")->capture_default_str();
  design_cmd->add_option("-o,--output", design.output, "write to file instead of stdout");
  design_cmd->add_option("--dot", design.dot_output, "also write a DOT graph here");
  design_cmd->add_option("--config", design.config, "run config JSON");
  design_cmd->add_option("--budget", design.budget, "search budget in node expansions");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a topology file's invariants");
  validate_cmd->add_option("topology", validate_path)->required();

  CostOptions cost;
  auto* cost_cmd = app.add_subcommand("cost", "Print the MHD cost table");
  cost_cmd->add_flag("--analytic", cost.analytic, "recompute from the yield model");
  cost_cmd->add_option("--format", cost.format, "text | csv")->capture_default_str();
  cost_cmd->add_option("--config", cost.config, "run config JSON (custom SKUs)");

  SweepOptions sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate configurations and their Pareto frontier");
  sweep_cmd->add_option("configs", sweep.configs, "config list JSON")->required();
  sweep_cmd->add_option("-o,--output", sweep.output, "sweep CSV path");
  sweep_cmd->add_option("--frontier", sweep.frontier_output, "frontier CSV path");
  sweep_cmd->add_flag("--analytic-cost", sweep.analytic_cost, "price SKUs from the yield model");
  sweep_cmd->add_option("--config", sweep.config, "run config JSON");

  SimulateOptions simulate;
  auto* simulate_cmd = app.add_subcommand("simulate", "Replay an allocation trace");
  simulate_cmd->add_option("topology", simulate.topology)->required();
  simulate_cmd->add_option("trace", simulate.trace)->required();
  simulate_cmd->add_option("--policy", simulate.policy,
                           "override every event: proportional | highest | symmetric");
  simulate_cmd->add_option("--capacity-gb", simulate.capacity_gb, "per-MHD capacity");
  simulate_cmd->add_option("--sku", simulate.sku, "SKU whose capacity fills each MHD")
      ->capture_default_str();
  simulate_cmd->add_option("--granularity-gb", simulate.granularity_gb, "report quantization");
  simulate_cmd->add_option("--resolution-gb", simulate.resolution_gb,
                           "snap committed shares to this grid (default: exact)");
  simulate_cmd->add_option("-o,--output", simulate.output, "report path");
  simulate_cmd->add_option("--config", simulate.config, "run config JSON");

  PlacementOptions placement;
  auto* placement_cmd = app.add_subcommand("placement", "Place pairwise queues on common MHDs");
  placement_cmd->add_option("topology", placement.topology)->required();
  placement_cmd->add_option("--pair-size", placement.pair_size_gb, "GB per host pair")
      ->capture_default_str();
  placement_cmd->add_option("-o,--output", placement.output, "plan path");

  CompareOptions compare;
  auto* compare_cmd = app.add_subcommand("compare", "Compare two configurations of a sweep file");
  compare_cmd->add_option("configs", compare.configs)->required();
  compare_cmd->add_option("--baseline", compare.baseline)->required();
  compare_cmd->add_option("--candidate", compare.candidate)->required();
  compare_cmd->add_flag("--analytic-cost", compare.analytic_cost);
  compare_cmd->add_option("--config", compare.config, "run config JSON");

  CurveOptions curve;
  auto* curve_cmd = app.add_subcommand("curve", "Pod size versus host ports");
  curve_cmd->add_option("-N,--mhd-ports", curve.mhd_ports)->capture_default_str();
  curve_cmd->add_option("--x-min", curve.x_min)->capture_default_str();
  curve_cmd->add_option("--x-max", curve.x_max)->capture_default_str();
  curve_cmd->add_option("--kinds", curve.kinds)->delimiter(',');
  curve_cmd->add_option("--lambda", curve.lambda);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*design_cmd) return cmd_design(design, std::cout, std::cerr);
  if (*validate_cmd) return cmd_validate(validate_path, std::cout, std::cerr);
  if (*cost_cmd) return cmd_cost(cost, std::cout, std::cerr);
  if (*sweep_cmd) return cmd_sweep(sweep, std::cout, std::cerr);
  if (*simulate_cmd) return cmd_simulate(simulate, std::cout, std::cerr);
  if (*placement_cmd) return cmd_placement(placement, std::cout, std::cerr);
  if (*compare_cmd) return cmd_compare(compare, std::cout, std::cerr);
  if (*curve_cmd) return cmd_curve(curve, std::cout, std::cerr);
  return kUsage;
}
