#include "octopus/placement.hpp"

#include <limits>

#include "octopus/error.hpp"

namespace octopus {

std::string_view to_string(PageSize size) {
  switch (size) {
    case PageSize::k4KiB:
      return "4KiB";
    case PageSize::k2MiB:
      return "2MiB";
    case PageSize::k1GiB:
      return "1GiB";
  }
  return "unknown";
}

std::optional<PageSize> parse_page_size(std::string_view text) {
  if (text == "4KiB" || text == "4k" || text == "4K") return PageSize::k4KiB;
  if (text == "2MiB" || text == "2m" || text == "2M") return PageSize::k2MiB;
  if (text == "1GiB" || text == "1g" || text == "1G") return PageSize::k1GiB;
  return std::nullopt;
}

InterleavePlan::InterleavePlan(const AllocationPlan& plan, PageSize page_size)
    : page_size_(page_size) {
  if (plan.request <= 0 || plan.shares.empty()) {
    throw Error(ErrorCode::EmptyPlan, "cannot interleave an empty allocation");
  }
  // GB here are binary: 1 GB = 2^30 bytes.
  const Gb pages = plan.request * Gb(BigInt(1) << 30) /
                   Gb(static_cast<std::uint64_t>(page_size));
  if (boost::multiprecision::denominator(pages) != 1) {
    throw Error(ErrorCode::InvalidArgument,
                "request of " + to_string(plan.request) +
                    " GB is not a whole number of " + std::string(to_string(page_size)) +
                    " pages");
  }
  page_count_ = boost::multiprecision::numerator(pages).convert_to<std::uint64_t>();
  for (const Share& s : plan.shares) {
    if (s.gb > 0) weights_.push_back({s.mhd, s.gb / plan.request});
  }
  if (weights_.empty()) {
    throw Error(ErrorCode::EmptyPlan, "allocation has no positive shares");
  }
}

namespace {

// Page t (1-based) may go to MHD i only while it is ahead of its target,
// t * w_i > assigned_i. Among those, the MHD whose next page is due soonest,
// at page ceil((assigned_i + 1) / w_i), wins; ties go to the lower index.
// With w_i = num_i / den everything stays in integers.
template <typename Int>
std::vector<MhdId> run_sequence(const std::vector<InterleaveWeight>& weights,
                                const std::vector<Int>& num, const Int& den,
                                std::uint64_t n) {
  std::vector<MhdId> out;
  out.reserve(n);
  std::vector<Int> assigned(weights.size(), Int(0));
  for (std::uint64_t t = 1; t <= n; ++t) {
    const Int step = Int(t);
    std::size_t best = weights.size();
    Int best_due = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      if (step * num[i] <= assigned[i] * den) continue;
      const Int due = ((assigned[i] + 1) * den + num[i] - 1) / num[i];
      if (best == weights.size() || due < best_due) {
        best = i;
        best_due = due;
      }
    }
    assigned[best] += Int(1);
    out.push_back(weights[best].mhd);
  }
  return out;
}

}  // namespace

std::vector<MhdId> InterleavePlan::sequence(std::uint64_t n) const {
  BigInt den = 1;
  for (const auto& w : weights_) {
    den = boost::multiprecision::lcm(den, boost::multiprecision::denominator(w.weight));
  }
  std::vector<BigInt> num;
  for (const auto& w : weights_) {
    num.push_back(boost::multiprecision::numerator(w.weight) * den /
                  boost::multiprecision::denominator(w.weight));
  }
  // Products stay below (n + 1) * den.
  constexpr auto kLimit = std::numeric_limits<std::int64_t>::max();
  if (den <= kLimit && n <= static_cast<std::uint64_t>(kLimit)) {
    std::vector<__int128> small;
    for (const auto& v : num) small.push_back(v.convert_to<std::int64_t>());
    return run_sequence<__int128>(weights_, small, den.convert_to<std::int64_t>(), n);
  }
  return run_sequence<BigInt>(weights_, num, den, n);
}

InterleavePlan interleave_plan(const AllocationPlan& plan, PageSize page_size) {
  return InterleavePlan(plan, page_size);
}

QueuePlan queue_plan(const PodTopology& topology, const Gb& per_pair_gb) {
  if (per_pair_gb <= 0) {
    throw Error(ErrorCode::InvalidArgument, "per-pair queue size must be positive");
  }
  if (topology.kind() == TopologyKind::DenseOctopus) {
    throw Error(ErrorCode::InvalidArgument,
                "queue placement is defined for regular and symmetric pods only");
  }
  QueuePlan plan;
  plan.per_mhd.assign(topology.mhd_count(), MhdQueueLoad{0, Gb(0)});
  const std::size_t hosts = topology.host_count();
  for (std::size_t a = 0; a < hosts; ++a) {
    for (std::size_t b = a + 1; b < hosts; ++b) {
      const auto shared = common_mhds(topology, HostId{a}, HostId{b});
      if (shared.empty()) {
        throw Error(ErrorCode::NoCommonMhd, host_name(HostId{a}) + " and " +
                                                host_name(HostId{b}) +
                                                " share no MHD");
      }
      MhdId pick = shared.front();
      for (MhdId m : shared) {
        if (plan.per_mhd[m.index].gb < plan.per_mhd[pick.index].gb) pick = m;
      }
      plan.per_mhd[pick.index].regions += 1;
      plan.per_mhd[pick.index].gb += per_pair_gb;
      plan.regions.push_back({HostId{a}, HostId{b}, pick, per_pair_gb});
    }
  }
  return plan;
}

}  // namespace octopus
