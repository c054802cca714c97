#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "octopus/allocator.hpp"
#include "octopus/analysis.hpp"
#include "octopus/hardware_model.hpp"
#include "octopus/placement.hpp"
#include "octopus/rational.hpp"
#include "octopus/topology.hpp"

namespace octopus {

// Knobs shared by every command. Loaded from a JSON file; missing fields
// keep these defaults.
struct RunConfig {
  std::vector<MhdSku> skus = builtin_skus();
  YieldModel yield;
  PageSize page_size = PageSize::k4KiB;
  Gb quantization_gb = 1;
  std::uint64_t search_budget = kDefaultSearchBudget;
  // Per-MHD pool capacity for simulations; unset means the SKU's capacity.
  std::optional<Gb> mhd_capacity_gb;
  // Grid for committed shares in simulations; unset keeps them exact.
  std::optional<Gb> share_resolution_gb;
};

RunConfig parse_config(std::string_view text);

// Canonical topology JSON: fixed key order, two-space indent, one edge per
// line, trailing LF. Parsing then re-serialising is byte-identical.
std::string topology_to_json(const PodTopology& topology);
PodTopology topology_from_json(std::string_view text);

// Hosts and MHDs on two ranks.
std::string topology_to_dot(const PodTopology& topology);

std::string validation_to_text(const PodTopology& topology,
                               const ValidationReport& report);

// One JSON object per line: {"op":"alloc","host":"H3","gb":150,
// "policy":"proportional"} or {"op":"free","id":"a1"}. Blank lines are
// skipped but still counted for line numbers. `policy_override` replaces the
// per-event policy. Throws Error(MalformedTrace) naming the line.
std::vector<TraceEvent> parse_trace(std::string_view text, const PodTopology& topology,
                                    std::optional<AllocationPolicy> policy_override = {});

std::string trace_report_to_json(const TraceReport& report, const Gb& granularity);

std::string queue_plan_to_json(const QueuePlan& plan);

// {"configs": [{"id":"1","kind":"regular","X":4,"N":4,"sku":"Small"}, ...]}
// or a bare array of the same objects.
std::vector<SweepConfig> parse_sweep_configs(std::string_view text);

// config,kind,N,X,pod_size,mhd_count,sku,cost_per_host,note
// Money is whole dollars. Skipped rows leave the numeric fields empty.
std::string sweep_to_csv(const std::vector<SweepRow>& rows);

std::string curve_to_csv(const std::vector<CurveSeries>& series);

enum class TableFormat { Text, Csv };

// Per-SKU die area, good dies, relative cost (vs `reference`) and unit cost.
// Printed mode reproduces the published table; analytic mode recomputes
// from the yield model and the XLarge price anchor.
std::string cost_table(const std::vector<MhdSku>& skus, const YieldModel& model,
                       bool analytic, TableFormat format,
                       std::string_view reference = "Large");

}  // namespace octopus
