#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace octopus::cli {

// Process exit codes shared by all subcommands.
enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInputError = 2,  // unreadable or unparseable input file
  kValidationFailed = 3,
  kIndivisibleParams = 4,
  kFisherViolation = 5,
  kSearchExhausted = 6,
  kNoDesignExists = 7,
  kMalformedTrace = 8,
  kUnsupportedTopology = 9,
};

struct DesignOptions {
  std::string kind = "regular";
  int host_ports = 0;
  int mhd_ports = 0;
  std::optional<int> lambda;
  int multiplicity = 1;
  std::string format = "json";  // json | dot
  std::optional<std::string> output;
  std::optional<std::string> dot_output;
  std::optional<std::string> config;
  std::optional<std::uint64_t> budget;
};

struct CostOptions {
  bool analytic = false;
  std::string format = "text";  // text | csv
  std::optional<std::string> config;
};

struct SweepOptions {
  std::string configs;
  std::optional<std::string> output;
  std::optional<std::string> frontier_output;
  bool analytic_cost = false;
  std::optional<std::string> config;
};

struct SimulateOptions {
  std::string topology;
  std::string trace;
  std::optional<std::string> policy;
  std::optional<std::string> capacity_gb;
  std::string sku = "Large";
  std::optional<std::string> granularity_gb;
  std::optional<std::string> resolution_gb;
  std::optional<std::string> output;
  std::optional<std::string> config;
};

struct PlacementOptions {
  std::string topology;
  std::string pair_size_gb = "1";
  std::optional<std::string> output;
};

struct CompareOptions {
  std::string configs;
  std::string baseline;
  std::string candidate;
  bool analytic_cost = false;
  std::optional<std::string> config;
};

struct CurveOptions {
  int mhd_ports = 8;
  int x_min = 1;
  int x_max = 8;
  std::vector<std::string> kinds = {"symmetric", "regular"};
  std::optional<int> lambda;
};

int cmd_design(const DesignOptions& opts, std::ostream& out, std::ostream& err);
int cmd_validate(const std::string& topology_path, std::ostream& out, std::ostream& err);
int cmd_cost(const CostOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_placement(const PlacementOptions& opts, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& opts, std::ostream& out, std::ostream& err);
int cmd_curve(const CurveOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace octopus::cli
