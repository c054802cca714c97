#include "octopus/analysis.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "octopus/error.hpp"

namespace octopus {

double unit_cost(const MhdSku& sku, const SweepContext& context) {
  if (context.cost_source == CostSource::Canonical) return sku.unit_cost;
  const MhdSku* anchor = find_sku(context.skus, context.anchor_sku);
  if (!anchor) {
    throw Error(ErrorCode::InvalidArgument, "unknown anchor SKU " + context.anchor_sku);
  }
  return estimate_unit_cost(sku, *anchor, context.anchor_cost, context.model);
}

namespace {

SweepRow evaluate(const SweepConfig& config, const SweepContext& context) {
  SweepRow row;
  row.config_id = config.id;
  row.kind = config.kind;
  row.mhd_ports = config.mhd_ports;
  row.host_ports = config.host_ports;
  row.sku = config.sku;

  const MhdSku* sku = find_sku(context.skus, config.sku);
  if (!sku) throw Error(ErrorCode::InvalidArgument, "unknown SKU " + config.sku);
  if (config.multiplicity < 1) {
    throw Error(ErrorCode::InvalidArgument, "multiplicity must be >= 1");
  }

  switch (config.kind) {
    case TopologyKind::Symmetric:
      if (config.host_ports < 1 || config.mhd_ports < 1) {
        throw Error(ErrorCode::InvalidArgument, "symmetric pod needs X, N >= 1");
      }
      row.pod_size = config.mhd_ports;
      row.mhd_count = config.host_ports;
      break;
    case TopologyKind::RegularOctopus: {
      const auto p = derive_regular_params(config.host_ports, config.mhd_ports);
      row.pod_size = p.v;
      row.mhd_count = p.b;
      break;
    }
    case TopologyKind::DenseOctopus: {
      if (!config.lambda) {
        throw Error(ErrorCode::InvalidArgument, "dense config needs lambda");
      }
      const auto p =
          derive_dense_params(config.host_ports, config.mhd_ports, *config.lambda);
      row.pod_size = p.v;
      row.mhd_count = p.b;
      break;
    }
  }
  row.cost_per_host = pod_cost_per_host(row.pod_size, row.mhd_count,
                                        config.multiplicity, unit_cost(*sku, context));
  return row;
}

}  // namespace

std::vector<SweepRow> sweep(const std::vector<SweepConfig>& configs,
                            const SweepContext& context) {
  std::vector<SweepRow> rows;
  rows.reserve(configs.size());
  for (const SweepConfig& config : configs) {
    try {
      rows.push_back(evaluate(config, context));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::IndivisibleParams &&
          e.code() != ErrorCode::FisherViolation &&
          e.code() != ErrorCode::InvalidArgument) {
        throw;
      }
      SweepRow row;
      row.config_id = config.id;
      row.kind = config.kind;
      row.mhd_ports = config.mhd_ports;
      row.host_ports = config.host_ports;
      row.sku = config.sku;
      row.skip_reason = std::string(to_string(e.code())) + ": " + e.what();
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

std::vector<SweepRow> pareto_frontier(const std::vector<SweepRow>& rows) {
  // Group by pod size, largest first; within a size only the cheapest row
  // (first listed on ties) can survive, and only if it beats every larger pod.
  std::map<long, std::size_t, std::greater<>> cheapest;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].skipped()) continue;
    auto [it, inserted] = cheapest.try_emplace(rows[i].pod_size, i);
    if (!inserted && rows[i].cost_per_host < rows[it->second].cost_per_host) {
      it->second = i;
    }
  }
  std::vector<SweepRow> frontier;
  bool have_best = false;
  double best_cost = 0.0;
  for (const auto& [size, index] : cheapest) {
    const double cost = rows[index].cost_per_host;
    if (!have_best || cost < best_cost) {
      frontier.push_back(rows[index]);
      best_cost = cost;
      have_best = true;
    }
  }
  std::reverse(frontier.begin(), frontier.end());
  return frontier;
}

std::vector<CurveSeries> pod_size_curve(const std::vector<TopologyKind>& kinds,
                                        int mhd_ports, int x_min, int x_max,
                                        std::optional<int> lambda) {
  if (x_min < 1 || x_max < x_min) {
    throw Error(ErrorCode::InvalidArgument, "host port range must be non-empty and >= 1");
  }
  if (mhd_ports < 1) throw Error(ErrorCode::InvalidArgument, "N must be >= 1");
  std::vector<CurveSeries> out;
  for (TopologyKind kind : kinds) {
    CurveSeries series{kind, {}};
    for (int x = x_min; x <= x_max; ++x) {
      const long spokes = static_cast<long>(x) * (mhd_ports - 1);
      switch (kind) {
        case TopologyKind::Symmetric:
          series.points.push_back({x, mhd_ports});
          break;
        case TopologyKind::RegularOctopus:
          series.points.push_back({x, 1 + spokes});
          break;
        case TopologyKind::DenseOctopus:
          if (!lambda || *lambda < 2) {
            throw Error(ErrorCode::InvalidArgument, "dense curve needs lambda >= 2");
          }
          if (spokes % *lambda == 0) series.points.push_back({x, 1 + spokes / *lambda});
          break;
      }
    }
    out.push_back(std::move(series));
  }
  return out;
}

PodComparison compare(const SweepRow& baseline, const SweepRow& candidate) {
  if (baseline.pod_size <= 0 || baseline.cost_per_host <= 0.0) {
    throw Error(ErrorCode::InvalidArgument, "baseline row must have hosts and cost");
  }
  return {static_cast<double>(candidate.pod_size) / static_cast<double>(baseline.pod_size),
          (baseline.cost_per_host - candidate.cost_per_host) / baseline.cost_per_host};
}

std::vector<SweepConfig> reference_configs() {
  using K = TopologyKind;
  return {
      {"1", K::Symmetric, 2, 2, "XSmall", std::nullopt, 1},
      {"2", K::RegularOctopus, 2, 2, "XSmall", std::nullopt, 1},
      {"3", K::RegularOctopus, 4, 2, "XSmall", std::nullopt, 1},
      {"4", K::Symmetric, 4, 4, "Small", std::nullopt, 1},
      {"5", K::RegularOctopus, 4, 4, "Small", std::nullopt, 1},
      {"6", K::RegularOctopus, 8, 4, "Small", std::nullopt, 1},
      {"7", K::Symmetric, 8, 8, "Large", std::nullopt, 1},
      {"8", K::RegularOctopus, 8, 8, "Large", std::nullopt, 1},
  };
}

}  // namespace octopus
