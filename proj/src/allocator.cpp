#include "octopus/allocator.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "octopus/error.hpp"

namespace octopus {

std::string_view to_string(AllocationPolicy policy) {
  switch (policy) {
    case AllocationPolicy::Proportional:
      return "proportional";
    case AllocationPolicy::SymmetricEqual:
      return "symmetric";
    case AllocationPolicy::HighestCapacity:
      return "highest";
  }
  return "unknown";
}

std::optional<AllocationPolicy> parse_policy(std::string_view text) {
  if (text == "proportional") return AllocationPolicy::Proportional;
  if (text == "symmetric" || text == "equal") return AllocationPolicy::SymmetricEqual;
  if (text == "highest" || text == "highest-capacity") {
    return AllocationPolicy::HighestCapacity;
  }
  return std::nullopt;
}

std::string to_string(AllocationId id) { return "a" + std::to_string(id.value); }

std::optional<AllocationId> parse_allocation_id(std::string_view text) {
  if (text.size() < 2 || text.front() != 'a') return std::nullopt;
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data() + 1, text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || value == 0) {
    return std::nullopt;
  }
  return AllocationId{value};
}

std::string_view to_string(EventStatus status) {
  switch (status) {
    case EventStatus::Allocated:
      return "allocated";
    case EventStatus::Freed:
      return "freed";
    case EventStatus::InsufficientCapacity:
      return "insufficient_capacity";
  }
  return "unknown";
}

Gb AllocationPlan::share_on(MhdId mhd) const {
  for (const Share& s : shares) {
    if (s.mhd == mhd) return s.gb;
  }
  return Gb(0);
}

std::vector<QuantizedShare> quantize(const AllocationPlan& plan,
                                     const Gb& granularity) {
  if (granularity <= 0) {
    throw Error(ErrorCode::InvalidArgument, "granularity must be positive");
  }
  const BigInt target = floor_of(plan.request / granularity + Gb(1, 2));
  std::vector<QuantizedShare> out;
  std::vector<Gb> remainders;
  BigInt assigned = 0;
  for (const Share& s : plan.shares) {
    const Gb quota = s.gb / granularity;
    const BigInt whole = floor_of(quota);
    out.push_back({s.mhd, whole.convert_to<std::int64_t>()});
    remainders.push_back(quota - Gb(whole));
    assigned += whole;
  }
  std::vector<std::size_t> order(out.size());
  std::iota(order.begin(), order.end(), 0);
  // Shares are ordered by MHD index, so a stable sort keeps the tie rule.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return remainders[a] > remainders[b];
  });
  BigInt left = target - assigned;
  for (std::size_t i = 0; left > 0 && i < order.size(); ++i, --left) {
    ++out[order[i]].units;
  }
  return out;
}

PoolState::PoolState(std::vector<Gb> capacities)
    : total_(std::move(capacities)), available_(total_) {
  for (const Gb& cap : total_) {
    if (cap < 0) {
      throw Error(ErrorCode::InvalidArgument, "MHD capacity must be non-negative");
    }
  }
}

PoolState PoolState::uniform(std::size_t mhd_count, const Gb& capacity) {
  return PoolState(std::vector<Gb>(mhd_count, capacity));
}

Gb PoolState::free_capacity() const {
  return std::accumulate(available_.begin(), available_.end(), Gb(0));
}

Gb PoolState::free_capacity(std::span<const MhdId> mhds) const {
  Gb sum = 0;
  for (MhdId m : mhds) sum += available(m);
  return sum;
}

void PoolState::commit(AllocationId id, HostId host, const AllocationPlan& plan) {
  if (ledger_.contains(id)) {
    throw Error(ErrorCode::InvalidArgument, "allocation " + to_string(id) + " is already live");
  }
  for (const Share& s : plan.shares) {
    if (s.mhd.index >= total_.size()) {
      throw Error(ErrorCode::InvalidArgument, "plan names unknown MHD " + mhd_name(s.mhd));
    }
    if (s.gb < 0 || s.gb > available_[s.mhd.index]) {
      throw Error(ErrorCode::InsufficientCapacity,
                  mhd_name(s.mhd) + " cannot supply " + to_string(s.gb) + " GB");
    }
  }
  for (const Share& s : plan.shares) available_[s.mhd.index] -= s.gb;
  ledger_.emplace(id, LedgerEntry{host, plan});
  next_id_ = std::max(next_id_, id.value + 1);
}

void PoolState::set_resolution(const Gb& step) {
  if (step <= 0) throw Error(ErrorCode::InvalidArgument, "resolution must be positive");
  for (const Gb& a : available_) {
    if (denominator(Gb(a / step)) != 1) {
      throw Error(ErrorCode::InvalidArgument,
                  "free capacity " + to_string(a) + " GB is not a multiple of " +
                      to_string(step) + " GB");
    }
  }
  resolution_ = step;
}

AllocationId PoolState::commit(HostId host, const AllocationPlan& plan) {
  const AllocationId id{next_id_};
  commit(id, host, plan);
  return id;
}

void PoolState::release(AllocationId id) {
  auto it = ledger_.find(id);
  if (it == ledger_.end()) {
    throw Error(ErrorCode::UnknownAllocation, "allocation " + to_string(id) + " is not live");
  }
  for (const Share& s : it->second.plan.shares) available_[s.mhd.index] += s.gb;
  ledger_.erase(it);
}

namespace {

[[noreturn]] void insufficient(HostId host, const Gb& reachable, const Gb& request) {
  throw Error(ErrorCode::InsufficientCapacity,
              host_name(host) + " requested " + to_string(request) +
                  " GB but its MHDs have " + to_string(reachable) + " GB free");
}

AllocationPlan plan_proportional(const PoolState& state,
                                 const std::vector<MhdId>& mhds, HostId host,
                                 const Gb& request) {
  const Gb reachable = state.free_capacity(mhds);
  if (reachable < request) insufficient(host, reachable, request);
  AllocationPlan plan{request, {}};
  for (MhdId m : mhds) {
    const Gb& avail = state.available(m);
    if (avail > 0) plan.shares.push_back({m, request * avail / reachable});
  }
  return plan;
}

AllocationPlan plan_equal(const PoolState& state, const PodTopology& topology,
                          const std::vector<MhdId>& mhds, HostId host,
                          const Gb& request) {
  if (topology.kind() != TopologyKind::Symmetric) {
    throw Error(ErrorCode::InvalidArgument,
                "equal-share allocation needs a symmetric topology");
  }
  if (mhds.empty()) insufficient(host, Gb(0), request);
  const Gb each = request / Gb(static_cast<long long>(mhds.size()));
  for (MhdId m : mhds) {
    if (state.available(m) < each) {
      throw Error(ErrorCode::InsufficientCapacity,
                  mhd_name(m) + " has " + to_string(state.available(m)) +
                      " GB free but the equal share is " + to_string(each) + " GB");
    }
  }
  AllocationPlan plan{request, {}};
  for (MhdId m : mhds) plan.shares.push_back({m, each});
  return plan;
}

AllocationPlan plan_highest(const PoolState& state, const std::vector<MhdId>& mhds,
                            HostId host, const Gb& request) {
  const Gb reachable = state.free_capacity(mhds);
  if (reachable < request) insufficient(host, reachable, request);
  std::vector<MhdId> order = mhds;
  std::stable_sort(order.begin(), order.end(), [&](MhdId a, MhdId b) {
    return state.available(a) > state.available(b);
  });
  AllocationPlan plan{request, {}};
  Gb left = request;
  for (MhdId m : order) {
    if (left == 0) break;
    const Gb take = std::min(left, state.available(m));
    if (take > 0) plan.shares.push_back({m, take});
    left -= take;
  }
  std::sort(plan.shares.begin(), plan.shares.end(),
            [](const Share& a, const Share& b) { return a.mhd < b.mhd; });
  return plan;
}

// Moves shares onto the state's grid; a rounded-up share never passes the
// MHD's free capacity because that capacity is itself on the grid.
AllocationPlan snap(const PoolState& state, AllocationPlan plan) {
  const auto& step = state.resolution();
  if (!step) return plan;
  const auto units = quantize(plan, *step);
  std::vector<Share> shares;
  for (const QuantizedShare& q : units) {
    if (q.units > 0) shares.push_back({q.mhd, Gb(q.units) * *step});
  }
  plan.shares = std::move(shares);
  for (const Share& s : plan.shares) {
    if (s.gb > state.available(s.mhd)) {
      throw Error(ErrorCode::InsufficientCapacity,
                  mhd_name(s.mhd) + " has " + to_string(state.available(s.mhd)) +
                      " GB free but the rounded share is " + to_string(s.gb) + " GB");
    }
  }
  return plan;
}

}  // namespace

AllocationPlan plan_allocation(const PoolState& state, const PodTopology& topology,
                               HostId host, const Gb& request,
                               AllocationPolicy policy) {
  if (request <= 0) {
    throw Error(ErrorCode::InvalidArgument, "request must be positive");
  }
  const auto& mhds = topology.mhds_of(host);
  if (state.mhd_count() != topology.mhd_count()) {
    throw Error(ErrorCode::InvalidArgument, "pool state does not match topology");
  }
  if (const auto& step = state.resolution(); step && denominator(Gb(request / *step)) != 1) {
    throw Error(ErrorCode::InvalidArgument, "request of " + to_string(request) +
                                                " GB is not a multiple of the " +
                                                to_string(*step) + " GB resolution");
  }
  switch (policy) {
    case AllocationPolicy::Proportional:
      return snap(state, plan_proportional(state, mhds, host, request));
    case AllocationPolicy::SymmetricEqual:
      return snap(state, plan_equal(state, topology, mhds, host, request));
    case AllocationPolicy::HighestCapacity:
      return plan_highest(state, mhds, host, request);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown policy");
}

Allocation allocate(PoolState& state, const PodTopology& topology, HostId host,
                    const Gb& request, AllocationPolicy policy) {
  AllocationPlan plan = plan_allocation(state, topology, host, request, policy);
  const AllocationId id = state.commit(host, plan);
  return {id, std::move(plan)};
}

AllocationPlan allocate_proportional(PoolState& state, const PodTopology& topology,
                                     HostId host, const Gb& request) {
  return allocate(state, topology, host, request, AllocationPolicy::Proportional).plan;
}

AllocationPlan allocate_symmetric_equal(PoolState& state, const PodTopology& topology,
                                        HostId host, const Gb& request) {
  return allocate(state, topology, host, request, AllocationPolicy::SymmetricEqual).plan;
}

AllocationPlan allocate_highest_capacity(PoolState& state,
                                         const PodTopology& topology, HostId host,
                                         const Gb& request) {
  return allocate(state, topology, host, request, AllocationPolicy::HighestCapacity).plan;
}

void free_allocation(PoolState& state, AllocationId id) { state.release(id); }

Gb TraceReport::peak_utilization(MhdId mhd) const {
  const Gb& cap = capacity.at(mhd.index);
  return cap == 0 ? Gb(0) : peak_used.at(mhd.index) / cap;
}

namespace {

[[noreturn]] void malformed(const TraceEvent& event, const std::string& what) {
  throw Error(ErrorCode::MalformedTrace, "line " + std::to_string(event.line) + ": " + what);
}

}  // namespace

TraceReport replay_trace(const PodTopology& topology, PoolState state,
                         std::span<const TraceEvent> events, PoolState* final_state) {
  if (state.mhd_count() != topology.mhd_count()) {
    throw Error(ErrorCode::InvalidArgument, "pool state does not match topology");
  }
  TraceReport report;
  report.peak_used.assign(state.mhd_count(), Gb(0));
  for (std::size_t m = 0; m < state.mhd_count(); ++m) {
    report.capacity.push_back(state.total(MhdId{m}));
  }

  std::uint64_t alloc_seq = 0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const TraceEvent& event = events[i];
    EventOutcome outcome;
    outcome.index = i;
    outcome.line = event.line;
    outcome.op = event.op;
    outcome.pod_free = state.free_capacity();

    if (event.op == TraceOp::Alloc) {
      outcome.id = AllocationId{++alloc_seq};
      if (!event.host || event.host->index >= topology.host_count()) {
        malformed(event, "alloc references an unknown host");
      }
      if (event.gb <= 0) malformed(event, "alloc size must be positive");
      if (const auto& step = state.resolution();
          step && denominator(Gb(event.gb / *step)) != 1) {
        malformed(event, "alloc size " + to_string(event.gb) + " GB is off the " +
                             to_string(*step) + " GB share grid");
      }
      if (event.policy == AllocationPolicy::SymmetricEqual &&
          topology.kind() != TopologyKind::Symmetric) {
        malformed(event, "symmetric policy needs a symmetric topology");
      }
      const HostId host = *event.host;
      outcome.host = host;
      outcome.request = event.gb;
      outcome.host_free = state.free_capacity(topology.mhds_of(host));
      try {
        AllocationPlan plan =
            plan_allocation(state, topology, host, event.gb, event.policy);
        state.commit(outcome.id, host, plan);
        outcome.plan = std::move(plan);
        outcome.status = EventStatus::Allocated;
      } catch (const Error& e) {
        if (e.code() != ErrorCode::InsufficientCapacity) throw;
        outcome.status = EventStatus::InsufficientCapacity;
        outcome.message = e.what();
        outcome.stranded =
            outcome.pod_free >= event.gb && outcome.host_free < event.gb;
        ++report.insufficient_count;
        if (outcome.stranded) ++report.stranding_count;
      }
    } else {
      outcome.id = event.id;
      if (!state.live(event.id)) {
        malformed(event, "free of " + to_string(event.id) + ", which is not live");
      }
      const LedgerEntry& entry = state.ledger().at(event.id);
      outcome.host = entry.host;
      outcome.request = entry.plan.request;
      outcome.plan = entry.plan;
      state.release(event.id);
      outcome.status = EventStatus::Freed;
    }

    for (std::size_t m = 0; m < state.mhd_count(); ++m) {
      const Gb used = state.total(MhdId{m}) - state.available(MhdId{m});
      if (used > report.peak_used[m]) report.peak_used[m] = used;
    }
    report.events.push_back(std::move(outcome));
  }
  if (final_state) *final_state = std::move(state);
  return report;
}

}  // namespace octopus
