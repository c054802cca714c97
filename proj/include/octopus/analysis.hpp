#pragma once

#include <optional>
#include <string>
#include <vector>

#include "octopus/hardware_model.hpp"
#include "octopus/topology.hpp"

namespace octopus {

struct SweepConfig {
  std::string id;
  TopologyKind kind = TopologyKind::RegularOctopus;
  int host_ports = 0;  // X
  int mhd_ports = 0;   // N
  std::string sku;
  std::optional<int> lambda;  // dense only
  int multiplicity = 1;
};

struct SweepRow {
  std::string config_id;
  TopologyKind kind = TopologyKind::RegularOctopus;
  int mhd_ports = 0;
  int host_ports = 0;
  long pod_size = 0;
  long mhd_count = 0;
  std::string sku;
  double cost_per_host = 0.0;
  // Set when the configuration is infeasible; the numeric fields are then
  // meaningless and the row is ignored by frontier extraction.
  std::optional<std::string> skip_reason;

  bool skipped() const { return skip_reason.has_value(); }
};

enum class CostSource { Canonical, Analytic };

struct SweepContext {
  std::vector<MhdSku> skus = builtin_skus();
  YieldModel model;
  CostSource cost_source = CostSource::Canonical;
  // Analytic costs scale from this SKU's price.
  std::string anchor_sku = "XLarge";
  double anchor_cost = kXLargeAnchorCost;
};

double unit_cost(const MhdSku& sku, const SweepContext& context);

// One row per config, in input order. Infeasible configs become skip rows.
std::vector<SweepRow> sweep(const std::vector<SweepConfig>& configs,
                            const SweepContext& context = {});

// Non-dominated rows under (larger pod size, lower $/host), ascending pod
// size. A row is dominated by one with pod size >= and cost <=, at least one
// strict; exact duplicates keep the first listed.
std::vector<SweepRow> pareto_frontier(const std::vector<SweepRow>& rows);

struct CurvePoint {
  int host_ports = 0;
  long pod_size = 0;
};

struct CurveSeries {
  TopologyKind kind;
  std::vector<CurvePoint> points;
};

// Pod size as a function of X at fixed N. Dense series need lambda and skip
// X values where lambda does not divide X (N - 1).
std::vector<CurveSeries> pod_size_curve(const std::vector<TopologyKind>& kinds,
                                        int mhd_ports, int x_min, int x_max,
                                        std::optional<int> lambda = std::nullopt);

struct PodComparison {
  double host_ratio = 0.0;      // candidate H / baseline H
  double cost_reduction = 0.0;  // (baseline $ - candidate $) / baseline $
};

PodComparison compare(const SweepRow& baseline, const SweepRow& candidate);

// The eight configurations of the reference comparison table.
std::vector<SweepConfig> reference_configs();

}  // namespace octopus
