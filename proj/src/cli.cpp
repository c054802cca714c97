#include "octopus/cli.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "octopus/error.hpp"
#include "octopus/io.hpp"

namespace octopus::cli {
namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::optional<std::string>& path, const std::string& text,
                  std::ostream& out) {
  if (!path) {
    out << text;
    return;
  }
  std::ofstream file(*path, std::ios::binary);
  if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write " + *path);
  file << text;
}

RunConfig load_config(const std::optional<std::string>& path) {
  return path ? parse_config(read_file(*path)) : RunConfig{};
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::IndivisibleParams:
      return kIndivisibleParams;
    case ErrorCode::FisherViolation:
      return kFisherViolation;
    case ErrorCode::SearchExhausted:
      return kSearchExhausted;
    case ErrorCode::NoDesignExists:
      return kNoDesignExists;
    case ErrorCode::MalformedTrace:
      return kMalformedTrace;
    case ErrorCode::ParseError:
      return kInputError;
    default:
      return kUsage;
  }
}

// Runs a command body, mapping library errors onto exit codes.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace

int cmd_design(const DesignOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = load_config(opts.config);
    const auto kind = parse_topology_kind(opts.kind);
    if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown kind " + opts.kind);
    if (opts.format != "json" && opts.format != "dot") {
      throw Error(ErrorCode::InvalidArgument, "format must be json or dot");
    }
    const std::uint64_t budget = opts.budget.value_or(config.search_budget);

    std::optional<PodTopology> topology;
    SearchStats stats;
    switch (*kind) {
      case TopologyKind::Symmetric:
        topology = construct_symmetric(opts.mhd_ports, opts.host_ports);
        break;
      case TopologyKind::RegularOctopus:
        topology = construct(derive_regular_params(opts.host_ports, opts.mhd_ports), budget,
                             &stats);
        break;
      case TopologyKind::DenseOctopus:
        if (!opts.lambda) throw Error(ErrorCode::InvalidArgument, "dense needs --lambda");
        topology = construct(derive_dense_params(opts.host_ports, opts.mhd_ports, *opts.lambda),
                             budget, &stats);
        break;
    }
    if (opts.multiplicity != 1) topology = with_multiplicity(*topology, opts.multiplicity);

    const std::string json = topology_to_json(*topology);
    const std::string dot = topology_to_dot(*topology);
    write_output(opts.output, opts.format == "json" ? json : dot, out);
    if (opts.dot_output) write_output(opts.dot_output, dot, out);
    err << "designed " << to_string(*kind) << " pod: " << topology->host_count() << " hosts, "
        << topology->mhd_count() << " MHDs";
    if (*kind != TopologyKind::Symmetric) err << " (" << stats.nodes_expanded << " nodes)";
    err << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_validate(const std::string& topology_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PodTopology topology = topology_from_json(read_file(topology_path));
    const ValidationReport report = validate(topology);
    out << validation_to_text(topology, report);
    return static_cast<int>(report.passed() ? kOk : kValidationFailed);
  });
}

int cmd_cost(const CostOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = load_config(opts.config);
    if (opts.format != "text" && opts.format != "csv") {
      throw Error(ErrorCode::InvalidArgument, "format must be text or csv");
    }
    out << cost_table(config.skus, config.yield, opts.analytic,
                      opts.format == "csv" ? TableFormat::Csv : TableFormat::Text);
    return static_cast<int>(kOk);
  });
}

namespace {

SweepContext sweep_context(const RunConfig& config, bool analytic) {
  SweepContext context;
  context.skus = config.skus;
  context.model = config.yield;
  context.cost_source = analytic ? CostSource::Analytic : CostSource::Canonical;
  return context;
}

}  // namespace

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = load_config(opts.config);
    const auto configs = parse_sweep_configs(read_file(opts.configs));
    const auto rows = sweep(configs, sweep_context(config, opts.analytic_cost));
    for (const SweepRow& row : rows) {
      if (row.skipped()) err << "config " << row.config_id << " skipped: " << *row.skip_reason << "\n";
    }
    const std::string frontier = sweep_to_csv(pareto_frontier(rows));
    write_output(opts.output, sweep_to_csv(rows), out);
    if (opts.frontier_output) {
      write_output(opts.frontier_output, frontier, out);
    } else {
      out << "\n" << frontier;
    }
    return static_cast<int>(kOk);
  });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = load_config(opts.config);
    const PodTopology topology = topology_from_json(read_file(opts.topology));

    std::optional<AllocationPolicy> policy;
    if (opts.policy) {
      policy = parse_policy(*opts.policy);
      if (!policy) throw Error(ErrorCode::InvalidArgument, "unknown policy " + *opts.policy);
    }
    Gb capacity;
    if (opts.capacity_gb) {
      capacity = parse_gb(*opts.capacity_gb);
    } else if (config.mhd_capacity_gb) {
      capacity = *config.mhd_capacity_gb;
    } else {
      const MhdSku* sku = find_sku(config.skus, opts.sku);
      if (!sku) throw Error(ErrorCode::InvalidArgument, "unknown SKU " + opts.sku);
      capacity = parse_gb(std::to_string(static_cast<long long>(sku->capacity_gb)));
    }
    if (capacity <= 0) throw Error(ErrorCode::InvalidArgument, "capacity must be positive");
    const Gb granularity =
        opts.granularity_gb ? parse_gb(*opts.granularity_gb) : config.quantization_gb;
    if (granularity <= 0) throw Error(ErrorCode::InvalidArgument, "granularity must be positive");

    PoolState state = PoolState::uniform(topology.mhd_count(), capacity);
    if (opts.resolution_gb) {
      state.set_resolution(parse_gb(*opts.resolution_gb));
    } else if (config.share_resolution_gb) {
      state.set_resolution(*config.share_resolution_gb);
    }

    const auto events = parse_trace(read_file(opts.trace), topology, policy);
    const TraceReport report = replay_trace(topology, std::move(state), events);
    write_output(opts.output, trace_report_to_json(report, granularity), out);
    return static_cast<int>(kOk);
  });
}

int cmd_placement(const PlacementOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const PodTopology topology = topology_from_json(read_file(opts.topology));
    if (topology.kind() == TopologyKind::DenseOctopus) {
      err << "error: queue placement on dense topologies is not supported "
             "(pairs share several MHDs and no placement rule is defined)\n";
      return static_cast<int>(kUnsupportedTopology);
    }
    const QueuePlan plan = queue_plan(topology, parse_gb(opts.pair_size_gb));
    write_output(opts.output, queue_plan_to_json(plan), out);
    return static_cast<int>(kOk);
  });
}

int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const RunConfig config = load_config(opts.config);
    const auto rows = sweep(parse_sweep_configs(read_file(opts.configs)),
                            sweep_context(config, opts.analytic_cost));
    auto find = [&](const std::string& id) -> const SweepRow& {
      for (const SweepRow& row : rows) {
        if (row.config_id == id) {
          if (row.skipped()) throw Error(ErrorCode::InvalidArgument, "config " + id + " is infeasible");
          return row;
        }
      }
      throw Error(ErrorCode::InvalidArgument, "no config with id " + id);
    };
    const SweepRow& base = find(opts.baseline);
    const SweepRow& cand = find(opts.candidate);
    const PodComparison c = compare(base, cand);
    out << std::fixed << std::setprecision(4);
    out << "baseline " << base.config_id << ": " << to_string(base.kind) << " H="
        << base.pod_size << " $/host=" << std::llround(base.cost_per_host) << "\n";
    out << "candidate " << cand.config_id << ": " << to_string(cand.kind) << " H="
        << cand.pod_size << " $/host=" << std::llround(cand.cost_per_host) << "\n";
    out << "host_ratio " << c.host_ratio << "\n";
    out << "extra_hosts_pct " << (c.host_ratio - 1.0) * 100.0 << "\n";
    out << "cost_reduction_pct " << c.cost_reduction * 100.0 << "\n";
    return static_cast<int>(kOk);
  });
}

int cmd_curve(const CurveOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::vector<TopologyKind> kinds;
    for (const auto& name : opts.kinds) {
      auto kind = parse_topology_kind(name);
      if (!kind) throw Error(ErrorCode::InvalidArgument, "unknown kind " + name);
      kinds.push_back(*kind);
    }
    out << curve_to_csv(pod_size_curve(kinds, opts.mhd_ports, opts.x_min, opts.x_max, opts.lambda));
    return static_cast<int>(kOk);
  });
}

}  // namespace octopus::cli
