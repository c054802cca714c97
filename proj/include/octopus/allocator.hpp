#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "octopus/rational.hpp"
#include "octopus/topology.hpp"

namespace octopus {

enum class AllocationPolicy { Proportional, SymmetricEqual, HighestCapacity };

std::string_view to_string(AllocationPolicy policy);
std::optional<AllocationPolicy> parse_policy(std::string_view text);

struct AllocationId {
  std::uint64_t value = 0;
  auto operator<=>(const AllocationId&) const = default;
};

// "a1", "a2", ...
std::string to_string(AllocationId id);
std::optional<AllocationId> parse_allocation_id(std::string_view text);

struct Share {
  MhdId mhd;
  Gb gb;
  bool operator==(const Share&) const = default;
};

// One request split over MHDs. Shares are ordered by MHD index.
struct AllocationPlan {
  Gb request;
  std::vector<Share> shares;

  Gb share_on(MhdId mhd) const;
  bool operator==(const AllocationPlan&) const = default;
};

struct QuantizedShare {
  MhdId mhd;
  std::int64_t units = 0;
};

// Rounds shares to whole multiples of `granularity` by largest remainder,
// ties to the lower MHD index. The unit total is request / granularity
// rounded half up.
std::vector<QuantizedShare> quantize(const AllocationPlan& plan, const Gb& granularity);

struct LedgerEntry {
  HostId host;
  AllocationPlan plan;
  bool operator==(const LedgerEntry&) const = default;
};

// Per-MHD capacity plus the live allocations drawn from it. Mutations go
// through allocate()/release(); a failed call leaves the state untouched.
class PoolState {
 public:
  explicit PoolState(std::vector<Gb> capacities);
  static PoolState uniform(std::size_t mhd_count, const Gb& capacity);

  std::size_t mhd_count() const { return total_.size(); }
  const Gb& total(MhdId mhd) const { return total_.at(mhd.index); }
  const Gb& available(MhdId mhd) const { return available_.at(mhd.index); }
  Gb free_capacity() const;
  Gb free_capacity(std::span<const MhdId> mhds) const;

  const std::map<AllocationId, LedgerEntry>& ledger() const { return ledger_; }
  bool live(AllocationId id) const { return ledger_.contains(id); }

  // Optional grid for committed shares. Unset keeps shares exact; set, every
  // plan is snapped to multiples of `step` by largest remainder. Free
  // capacity must already lie on the grid.
  void set_resolution(const Gb& step);
  const std::optional<Gb>& resolution() const { return resolution_; }

  void commit(AllocationId id, HostId host, const AllocationPlan& plan);
  AllocationId commit(HostId host, const AllocationPlan& plan);
  void release(AllocationId id);

  // Capacity and ledger equality; the id counter is not part of the state.
  bool operator==(const PoolState& other) const {
    return total_ == other.total_ && available_ == other.available_ &&
           ledger_ == other.ledger_;
  }

 private:
  std::vector<Gb> total_;
  std::vector<Gb> available_;
  std::map<AllocationId, LedgerEntry> ledger_;
  std::optional<Gb> resolution_;
  std::uint64_t next_id_ = 1;
};

// Pure planning; throws Error(InsufficientCapacity) without touching state.
AllocationPlan plan_allocation(const PoolState& state, const PodTopology& topology,
                               HostId host, const Gb& request,
                               AllocationPolicy policy);

struct Allocation {
  AllocationId id;
  AllocationPlan plan;
};

Allocation allocate(PoolState& state, const PodTopology& topology, HostId host,
                    const Gb& request, AllocationPolicy policy);

// Shares proportional to each connected MHD's available capacity.
AllocationPlan allocate_proportional(PoolState& state, const PodTopology& topology,
                                     HostId host, const Gb& request);
// request / X from every MHD; symmetric pods only.
AllocationPlan allocate_symmetric_equal(PoolState& state, const PodTopology& topology,
                                        HostId host, const Gb& request);
// Fill from the fullest connected MHD first, spilling over when drained.
AllocationPlan allocate_highest_capacity(PoolState& state,
                                         const PodTopology& topology, HostId host,
                                         const Gb& request);

void free_allocation(PoolState& state, AllocationId id);

enum class TraceOp { Alloc, Free };

struct TraceEvent {
  TraceOp op = TraceOp::Alloc;
  std::optional<HostId> host;
  Gb gb;
  AllocationPolicy policy = AllocationPolicy::Proportional;
  AllocationId id;  // Free only
  std::size_t line = 0;
};

enum class EventStatus { Allocated, Freed, InsufficientCapacity };

std::string_view to_string(EventStatus status);

struct EventOutcome {
  std::size_t index = 0;
  std::size_t line = 0;
  TraceOp op = TraceOp::Alloc;
  EventStatus status = EventStatus::Allocated;
  AllocationId id;
  std::optional<HostId> host;
  Gb request;
  std::optional<AllocationPlan> plan;
  Gb host_free;
  Gb pod_free;
  bool stranded = false;
  std::string message;
};

struct TraceReport {
  std::vector<EventOutcome> events;
  std::vector<Gb> peak_used;  // per MHD
  std::vector<Gb> capacity;   // per MHD
  std::size_t insufficient_count = 0;
  std::size_t stranding_count = 0;

  Gb peak_utilization(MhdId mhd) const;
};

// Deterministic sequential replay. Alloc events get ids a1, a2, ... by their
// position among alloc events, failed ones included, so a trace can name
// the allocation it frees without knowing outcomes in advance.
// Stranding: a failed alloc where the pod as a whole has enough free
// capacity but the host's connected MHDs together do not.
// Throws Error(MalformedTrace) naming the line for unknown hosts, frees of
// ids that are not live, and policies the topology cannot serve.
TraceReport replay_trace(const PodTopology& topology, PoolState state,
                         std::span<const TraceEvent> events,
                         PoolState* final_state = nullptr);

}  // namespace octopus
