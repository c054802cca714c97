#include "octopus/hardware_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "octopus/error.hpp"

namespace octopus {

const std::vector<MhdSku>& builtin_skus() {
  // Capacity assumes 64 GB DIMMs, one per DDR5 channel.
  static const std::vector<MhdSku> skus = {
      {"XSmall", 2, 2, 14.0, 0.0, 128.0, 230.0, false, 300.0, 4263},
      {"Small", 4, 4, 30.0, 2.0, 256.0, 250.0, false, 670.0, 1912},
      {"Large", 8, 8, 69.0, 12.0, 512.0, 350.0, false, 1600.0, 799},
      {"XLarge", 16, 12, 181.0, 77.0, 768.0, 400.0, true, 5000.0, 260},
  };
  return skus;
}

const MhdSku* find_sku(const std::vector<MhdSku>& skus, std::string_view name) {
  auto it = std::find_if(skus.begin(), skus.end(),
                         [&](const MhdSku& s) { return s.name == name; });
  return it == skus.end() ? nullptr : &*it;
}

namespace {

void require_area(double die_area_mm2) {
  if (!(die_area_mm2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "die area must be positive");
  }
}

}  // namespace

long gross_dies_per_wafer(const YieldModel& model, double die_area_mm2) {
  require_area(die_area_mm2);
  const double d = model.wafer_diameter_mm;
  const double radius = d / 2.0;
  const double dies = std::numbers::pi * radius * radius / die_area_mm2 -
                      std::numbers::pi * d / std::sqrt(2.0 * die_area_mm2);
  return dies <= 0.0 ? 0 : static_cast<long>(std::floor(dies));
}

double murphy_yield(const YieldModel& model, double die_area_mm2) {
  require_area(die_area_mm2);
  const double ad = die_area_mm2 * model.defect_density_per_mm2;
  if (ad < 1e-8) return 1.0;
  // -expm1(-x) keeps precision for small AD.
  const double y = -std::expm1(-ad) / ad;
  return y * y;
}

long good_dies_per_wafer(const YieldModel& model, double die_area_mm2) {
  const long gross = gross_dies_per_wafer(model, die_area_mm2);
  return static_cast<long>(
      std::floor(static_cast<double>(gross) * murphy_yield(model, die_area_mm2)));
}

long good_dies(const MhdSku& sku, const YieldModel& model, DieSource source) {
  if (source == DieSource::Printed) {
    if (!sku.printed_good_dies) {
      throw Error(ErrorCode::InvalidArgument,
                  "SKU " + sku.name + " has no published good-die count");
    }
    return *sku.printed_good_dies;
  }
  return good_dies_per_wafer(model, sku.die_area_mm2);
}

double relative_cost(const MhdSku& sku, const MhdSku& reference,
                     const YieldModel& model, DieSource source) {
  const long mine = good_dies(sku, model, source);
  if (mine <= 0) {
    throw Error(ErrorCode::ZeroGoodDies, "SKU " + sku.name + " yields no good dies");
  }
  const long theirs = good_dies(reference, model, source);
  if (theirs <= 0) {
    throw Error(ErrorCode::ZeroGoodDies,
                "SKU " + reference.name + " yields no good dies");
  }
  return static_cast<double>(theirs) / static_cast<double>(mine);
}

double estimate_unit_cost(const MhdSku& sku, const MhdSku& anchor,
                          double anchor_cost, const YieldModel& model,
                          DieSource source) {
  if (!(anchor_cost > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "anchor cost must be positive");
  }
  return anchor_cost * relative_cost(sku, anchor, model, source);
}

double pod_cost_per_host(long hosts, long mhds, int multiplicity, double unit_cost) {
  if (hosts < 1) throw Error(ErrorCode::InvalidArgument, "pod has no hosts");
  return static_cast<double>(mhds) * unit_cost * multiplicity /
         static_cast<double>(hosts);
}

double pod_cost_per_host(const PodTopology& topology, const MhdSku& sku) {
  return pod_cost_per_host(static_cast<long>(topology.host_count()),
                           static_cast<long>(topology.mhd_count()),
                           topology.multiplicity(), sku.unit_cost);
}

CalibrationResult calibrate_defect_density(const std::vector<MhdSku>& skus,
                                           double wafer_diameter_mm, double lo,
                                           double hi, double step) {
  CalibrationResult best{lo, std::numeric_limits<double>::infinity()};
  const long steps = std::lround((hi - lo) / step);
  for (long i = 0; i <= steps; ++i) {
    const YieldModel model{wafer_diameter_mm, lo + static_cast<double>(i) * step};
    double worst = 0.0;
    for (const MhdSku& sku : skus) {
      if (!sku.printed_good_dies) continue;
      const double target = static_cast<double>(*sku.printed_good_dies);
      const double got =
          static_cast<double>(good_dies_per_wafer(model, sku.die_area_mm2));
      worst = std::max(worst, std::abs(got - target) / target);
    }
    if (worst < best.max_relative_error) {
      best = {model.defect_density_per_mm2, worst};
    }
  }
  return best;
}

}  // namespace octopus
