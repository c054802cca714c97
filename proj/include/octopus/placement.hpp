#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "octopus/allocator.hpp"
#include "octopus/rational.hpp"
#include "octopus/topology.hpp"

namespace octopus {

enum class PageSize : std::uint64_t {
  k4KiB = 4ULL << 10,
  k2MiB = 2ULL << 20,
  k1GiB = 1ULL << 30,
};

std::string_view to_string(PageSize size);
std::optional<PageSize> parse_page_size(std::string_view text);

struct InterleaveWeight {
  MhdId mhd;
  Gb weight;
};

// Weighted round robin over an allocation's MHDs. Every prefix of n pages
// gives each MHD within one page of n * w_i: among MHDs still below their
// running target, the one whose next page falls due first is picked, ties to
// the lower MHD index.
class InterleavePlan {
 public:
  InterleavePlan(const AllocationPlan& plan, PageSize page_size);

  PageSize page_size() const { return page_size_; }
  const std::vector<InterleaveWeight>& weights() const { return weights_; }
  // Total pages the allocation spans (request / page size).
  std::uint64_t page_count() const { return page_count_; }

  // MHD of each of the first n pages; n may exceed page_count().
  std::vector<MhdId> sequence(std::uint64_t n) const;

 private:
  PageSize page_size_;
  std::vector<InterleaveWeight> weights_;
  std::uint64_t page_count_ = 0;
};

InterleavePlan interleave_plan(const AllocationPlan& plan, PageSize page_size);

struct PairRegion {
  HostId a;
  HostId b;
  MhdId mhd;
  Gb gb;
};

struct MhdQueueLoad {
  std::size_t regions = 0;
  Gb gb;
};

struct QueuePlan {
  std::vector<PairRegion> regions;  // pairs in lexicographic order
  std::vector<MhdQueueLoad> per_mhd;
};

// One region of per_pair_gb for every unordered host pair, placed on a
// common MHD: the unique one on regular pods, the least loaded (ties to the
// lower index) on symmetric pods. Dense pods are rejected.
QueuePlan queue_plan(const PodTopology& topology, const Gb& per_pair_gb);

}  // namespace octopus
