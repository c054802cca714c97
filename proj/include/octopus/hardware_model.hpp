#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "octopus/topology.hpp"

namespace octopus {

struct MhdSku {
  std::string name;
  int cxl_ports = 0;
  int ddr5_channels = 0;
  double die_area_mm2 = 0.0;
  double unused_area_mm2 = 0.0;
  double capacity_gb = 0.0;
  // Latency is carried as metadata only. XLarge is printed as ">400 ns".
  double latency_ns = 0.0;
  bool latency_is_lower_bound = false;
  double unit_cost = 0.0;
  // Published good-dies-per-wafer figure, when the SKU comes from the
  // reference table.
  std::optional<long> printed_good_dies;

  bool valid() const {
    return die_area_mm2 > 0.0 && unused_area_mm2 >= 0.0 &&
           unused_area_mm2 < die_area_mm2 && cxl_ports >= 1;
  }
};

// Four reference MHD sizes: XSmall, Small, Large, XLarge.
const std::vector<MhdSku>& builtin_skus();
const MhdSku* find_sku(const std::vector<MhdSku>& skus, std::string_view name);

// Defect density fitted once against the published good-die counts (minimax
// relative error on a 1e-5 grid); see calibrate_defect_density().
inline constexpr double kCalibratedDefectDensity = 0.00218;

struct YieldModel {
  double wafer_diameter_mm = 300.0;
  double defect_density_per_mm2 = kCalibratedDefectDensity;

  bool valid() const {
    return wafer_diameter_mm > 0.0 && defect_density_per_mm2 > 0.0;
  }
};

// floor(pi (d/2)^2 / A - pi d / sqrt(2A)), clamped at zero.
long gross_dies_per_wafer(const YieldModel& model, double die_area_mm2);

// Murphy: ((1 - e^{-AD}) / AD)^2, with the limit 1 as AD -> 0.
double murphy_yield(const YieldModel& model, double die_area_mm2);

long good_dies_per_wafer(const YieldModel& model, double die_area_mm2);

// Where a SKU's good-die count comes from when comparing costs.
enum class DieSource { Analytic, Printed };

long good_dies(const MhdSku& sku, const YieldModel& model, DieSource source);

// good_dies(reference) / good_dies(sku).
double relative_cost(const MhdSku& sku, const MhdSku& reference,
                     const YieldModel& model,
                     DieSource source = DieSource::Analytic);

double estimate_unit_cost(const MhdSku& sku, const MhdSku& anchor,
                          double anchor_cost, const YieldModel& model,
                          DieSource source = DieSource::Analytic);

// The reference anchor: the cheapest Zen4 EPYC at $1000, half of it for the
// IO die, times 10 for low MHD volume, pinned to XLarge.
inline constexpr double kAnchorCpuPrice = 1000.0;
inline constexpr double kIoDieShare = 0.5;
inline constexpr double kLowVolumeFactor = 10.0;
inline constexpr double kXLargeAnchorCost =
    kAnchorCpuPrice * kIoDieShare * kLowVolumeFactor;

// |mhds| * unit_cost * multiplicity / |hosts|. Cabling and power excluded.
double pod_cost_per_host(const PodTopology& topology, const MhdSku& sku);
double pod_cost_per_host(long hosts, long mhds, int multiplicity, double unit_cost);

struct CalibrationResult {
  double defect_density = 0.0;
  double max_relative_error = 0.0;
};

// Minimax fit of one defect density against each SKU's printed good-die
// count, scanning [lo, hi] at `step`.
CalibrationResult calibrate_defect_density(const std::vector<MhdSku>& skus,
                                           double wafer_diameter_mm = 300.0,
                                           double lo = 1e-5, double hi = 0.02,
                                           double step = 1e-5);

}  // namespace octopus
