#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "octopus/allocator.hpp"
#include "octopus/error.hpp"

using namespace octopus;

namespace {

const PodTopology& triangle() {
  static const PodTopology t = construct(derive_regular_params(2, 2));
  return t;
}

constexpr HostId H1{0}, H2{1}, H3{2};
constexpr MhdId P1{0}, P2{1}, P3{2}, P4{3};

Gb frac(long n, long d) { return Gb(n) / Gb(d); }

AllocationPlan plan(const Gb& request, std::vector<Share> shares) {
  return AllocationPlan{request, std::move(shares)};
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(Proportional, WorkedExample) {
  PoolState s = PoolState::uniform(3, 100);
  EXPECT_EQ(allocate_proportional(s, triangle(), H1, 100),
            plan(100, {{P1, 50}, {P2, 50}}));
  EXPECT_EQ(allocate_proportional(s, triangle(), H3, 150),
            plan(150, {{P2, 50}, {P3, 100}}));
  EXPECT_EQ(s.free_capacity(), 50);
}

TEST(Proportional, ExactThirds) {
  PoolState s = PoolState::uniform(3, 100);
  allocate_proportional(s, triangle(), H1, 100);
  EXPECT_EQ(allocate_proportional(s, triangle(), H3, 100),
            plan(100, {{P2, frac(100, 3)}, {P3, frac(200, 3)}}));
  // H1 keeps 50 + 50/3 reachable, where an equal split would leave it 50.
  const auto& mhds = triangle().mhds_of(H1);
  EXPECT_EQ(s.free_capacity(mhds), frac(200, 3));
}

TEST(Proportional, SingleMhdHost) {
  const PodTopology one = construct_symmetric(1, 1);
  PoolState s = PoolState::uniform(1, 10);
  EXPECT_EQ(allocate_proportional(s, one, HostId{0}, 10), plan(10, {{MhdId{0}, 10}}));
  EXPECT_EQ(s.free_capacity(), 0);
}

TEST(Proportional, OmitsDrainedMhds) {
  PoolState s({0, 40, 100});
  EXPECT_EQ(allocate_proportional(s, triangle(), H1, 20), plan(20, {{P2, 20}}));
}

TEST(Proportional, Errors) {
  PoolState s = PoolState::uniform(3, 100);
  const PoolState before = s;
  EXPECT_EQ(code_of([&] { allocate_proportional(s, triangle(), H1, 201); }),
            ErrorCode::InsufficientCapacity);
  EXPECT_EQ(s, before);
  EXPECT_EQ(code_of([&] { allocate_proportional(s, triangle(), H1, 0); }),
            ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { allocate_proportional(s, triangle(), HostId{5}, 1); }),
            ErrorCode::UnknownHost);
}

TEST(Proportional, RandomProperties) {
  std::mt19937 rng(11);
  const PodTopology t = construct(derive_regular_params(4, 4));
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Gb> caps;
    for (std::size_t j = 0; j < t.mhd_count(); ++j) caps.push_back(Gb(long(rng() % 50)));
    PoolState s(caps);
    const HostId h{rng() % t.host_count()};
    Gb reach = s.free_capacity(t.mhds_of(h));
    if (reach == 0) continue;
    const Gb request = reach * Gb(long(rng() % 97 + 1)) / Gb(97);
    const AllocationPlan p = allocate_proportional(s, t, h, request);
    Gb sum = 0;
    for (const Share& share : p.shares) {
      EXPECT_TRUE(t.connected(h, share.mhd));
      EXPECT_GT(share.gb, 0);
      // share / request == available / reachable, in exact arithmetic.
      EXPECT_EQ(share.gb * reach, request * caps[share.mhd.index]);
      sum += share.gb;
    }
    EXPECT_EQ(sum, request);
  }
}

TEST(SymmetricEqual, Examples) {
  const PodTopology sym = construct_symmetric(8, 4);
  PoolState s = PoolState::uniform(4, 2048);
  EXPECT_EQ(allocate_symmetric_equal(s, sym, HostId{3}, 100),
            plan(100, {{P1, 25}, {P2, 25}, {P3, 25}, {P4, 25}}));
  EXPECT_EQ(code_of([&] { allocate_symmetric_equal(s, sym, HostId{0}, 0); }),
            ErrorCode::InvalidArgument);
}

TEST(SymmetricEqual, NamesBindingMhd) {
  const PodTopology sym = construct_symmetric(8, 4);
  PoolState s({2048, 10, 2048, 2048});
  try {
    allocate_symmetric_equal(s, sym, HostId{0}, 100);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InsufficientCapacity);
    EXPECT_NE(std::string(e.what()).find("P2"), std::string::npos) << e.what();
  }
  EXPECT_EQ(s, PoolState({2048, 10, 2048, 2048}));
}

TEST(SymmetricEqual, RejectsOctopus) {
  PoolState s = PoolState::uniform(3, 100);
  EXPECT_THROW(allocate_symmetric_equal(s, triangle(), H1, 10), Error);
}

TEST(SymmetricEqual, MatchesProportionalOnEqualPools) {
  const PodTopology sym = construct_symmetric(4, 3);
  for (long request : {3L, 30L, 299L}) {
    PoolState a = PoolState::uniform(3, 100);
    PoolState b = PoolState::uniform(3, 100);
    EXPECT_EQ(allocate_symmetric_equal(a, sym, HostId{1}, request),
              allocate_proportional(b, sym, HostId{1}, request));
  }
}

TEST(HighestCapacity, Examples) {
  PoolState s = PoolState::uniform(3, 100);
  allocate_proportional(s, triangle(), H1, 100);  // P2 = 50, P3 = 100
  EXPECT_EQ(plan_allocation(s, triangle(), H3, 60, AllocationPolicy::HighestCapacity),
            plan(60, {{P3, 60}}));
  EXPECT_EQ(plan_allocation(s, triangle(), H3, 120, AllocationPolicy::HighestCapacity),
            plan(120, {{P2, 20}, {P3, 100}}));
  EXPECT_EQ(code_of([&] { allocate_highest_capacity(s, triangle(), H3, 151); }),
            ErrorCode::InsufficientCapacity);
}

TEST(HighestCapacity, TieGoesToLowerIndex) {
  PoolState s({50, 50, 7});
  EXPECT_EQ(allocate_highest_capacity(s, triangle(), H1, 10), plan(10, {{P1, 10}}));
}

TEST(Free, RestoresState) {
  PoolState s = PoolState::uniform(3, 100);
  const PoolState initial = s;
  const Allocation a = allocate(s, triangle(), H1, 100, AllocationPolicy::Proportional);
  EXPECT_TRUE(s.live(a.id));
  free_allocation(s, a.id);
  EXPECT_EQ(s, initial);
  EXPECT_EQ(code_of([&] { free_allocation(s, a.id); }), ErrorCode::UnknownAllocation);
}

TEST(Free, AnyOrderReturnsToInitial) {
  std::vector<int> order = {0, 1, 2};
  do {
    PoolState s = PoolState::uniform(3, 100);
    const PoolState initial = s;
    std::vector<AllocationId> ids;
    ids.push_back(allocate(s, triangle(), H1, 70, AllocationPolicy::Proportional).id);
    ids.push_back(allocate(s, triangle(), H2, 55, AllocationPolicy::HighestCapacity).id);
    ids.push_back(allocate(s, triangle(), H3, 40, AllocationPolicy::Proportional).id);
    for (int i : order) free_allocation(s, ids[i]);
    EXPECT_EQ(s, initial);
  } while (std::next_permutation(order.begin(), order.end()));
}

TEST(Quantize, LargestRemainder) {
  const auto q = quantize(plan(100, {{P2, frac(100, 3)}, {P3, frac(200, 3)}}), 1);
  ASSERT_EQ(q.size(), 2u);
  EXPECT_EQ(q[0].units, 33);
  EXPECT_EQ(q[1].units, 67);
  // Equal remainders go to the lower index.
  const auto t = quantize(plan(2, {{P1, frac(2, 3)}, {P2, frac(2, 3)}, {P3, frac(2, 3)}}), 1);
  EXPECT_EQ(t[0].units, 1);
  EXPECT_EQ(t[1].units, 1);
  EXPECT_EQ(t[2].units, 0);
  const auto g = quantize(plan(100, {{P1, 25}, {P2, 25}, {P3, 50}}), 25);
  EXPECT_EQ(g[0].units + g[1].units + g[2].units, 4);
}

TEST(Policy, Names) {
  EXPECT_EQ(parse_policy("proportional"), AllocationPolicy::Proportional);
  EXPECT_EQ(parse_policy("highest"), AllocationPolicy::HighestCapacity);
  EXPECT_EQ(parse_policy("symmetric"), AllocationPolicy::SymmetricEqual);
  EXPECT_FALSE(parse_policy("greedy").has_value());
  EXPECT_EQ(to_string(AllocationId{3}), "a3");
  EXPECT_EQ(parse_allocation_id("a12"), AllocationId{12});
  EXPECT_FALSE(parse_allocation_id("b1").has_value());
}

namespace {

TraceEvent alloc_event(HostId h, long gb, std::size_t line,
                       AllocationPolicy p = AllocationPolicy::Proportional) {
  TraceEvent e;
  e.op = TraceOp::Alloc;
  e.host = h;
  e.gb = gb;
  e.policy = p;
  e.line = line;
  return e;
}

TraceEvent free_event(std::uint64_t id, std::size_t line) {
  TraceEvent e;
  e.op = TraceOp::Free;
  e.id = AllocationId{id};
  e.line = line;
  return e;
}

}  // namespace

TEST(Replay, EmptyTrace) {
  const TraceReport r = replay_trace(triangle(), PoolState::uniform(3, 100), {});
  EXPECT_TRUE(r.events.empty());
  EXPECT_EQ(r.insufficient_count, 0u);
  EXPECT_EQ(r.stranding_count, 0u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(r.peak_utilization(MhdId{j}), 0);
}

TEST(Replay, WorkedExample) {
  const std::vector<TraceEvent> events = {alloc_event(H1, 100, 1), alloc_event(H3, 150, 2)};
  PoolState final_state = PoolState::uniform(3, 0);
  const TraceReport r = replay_trace(triangle(), PoolState::uniform(3, 100), events, &final_state);
  ASSERT_EQ(r.events.size(), 2u);
  EXPECT_EQ(*r.events[0].plan, plan(100, {{P1, 50}, {P2, 50}}));
  EXPECT_EQ(*r.events[1].plan, plan(150, {{P2, 50}, {P3, 100}}));
  EXPECT_EQ(r.peak_utilization(P2), 1);
  EXPECT_EQ(r.peak_utilization(P1), frac(1, 2));
  EXPECT_EQ(final_state.free_capacity(), 50);
}

TEST(Replay, StrandingAndAtomicFailure) {
  // After these two allocations P1 = 50, P2 = 50/3, P3 = 100/3: the pod
  // holds 100 GB but H3 reaches only 50.
  const std::vector<TraceEvent> events = {alloc_event(H1, 100, 1), alloc_event(H3, 100, 2),
                                          alloc_event(H3, 60, 3), alloc_event(H2, 120, 4),
                                          free_event(1, 5), alloc_event(H3, 60, 6)};
  const TraceReport r = replay_trace(triangle(), PoolState::uniform(3, 100), events);
  ASSERT_EQ(r.events.size(), 6u);
  EXPECT_EQ(r.events[2].status, EventStatus::InsufficientCapacity);
  EXPECT_TRUE(r.events[2].stranded);
  EXPECT_EQ(r.events[2].host_free, 50);
  EXPECT_EQ(r.events[2].pod_free, 100);
  EXPECT_EQ(r.events[3].status, EventStatus::InsufficientCapacity);
  EXPECT_FALSE(r.events[3].stranded);  // pod has only 100 free
  EXPECT_EQ(r.events[4].status, EventStatus::Freed);
  EXPECT_EQ(r.events[5].status, EventStatus::Allocated);
  EXPECT_EQ(r.events[5].id, AllocationId{5});
  EXPECT_EQ(r.insufficient_count, 2u);
  EXPECT_EQ(r.stranding_count, 1u);
}

TEST(Replay, MalformedEventsNameTheLine) {
  const std::vector<TraceEvent> bad_free = {alloc_event(H1, 10, 1), free_event(9, 4)};
  try {
    replay_trace(triangle(), PoolState::uniform(3, 100), bad_free);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::MalformedTrace);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
  const std::vector<TraceEvent> bad_host = {alloc_event(HostId{7}, 10, 2)};
  EXPECT_THROW(replay_trace(triangle(), PoolState::uniform(3, 100), bad_host), Error);
  const std::vector<TraceEvent> bad_policy = {
      alloc_event(H1, 10, 1, AllocationPolicy::SymmetricEqual)};
  EXPECT_THROW(replay_trace(triangle(), PoolState::uniform(3, 100), bad_policy), Error);
}

TEST(Replay, Deterministic) {
  std::mt19937 rng(3);
  std::vector<TraceEvent> events;
  for (std::size_t i = 0; i < 200; ++i) {
    events.push_back(alloc_event(HostId{rng() % 3}, long(rng() % 40 + 1), i + 1));
  }
  PoolState state = PoolState::uniform(3, 500);
  state.set_resolution(Gb(1) / Gb(1024));
  const TraceReport a = replay_trace(triangle(), state, events);
  const TraceReport b = replay_trace(triangle(), state, events);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_EQ(a.events[i].status, b.events[i].status);
    EXPECT_EQ(a.events[i].plan, b.events[i].plan);
  }
}

TEST(Resolution, SnapsSharesToGrid) {
  PoolState s = PoolState::uniform(3, 100);
  s.set_resolution(1);
  allocate_proportional(s, triangle(), H1, 100);
  EXPECT_EQ(allocate_proportional(s, triangle(), H3, 100),
            plan(100, {{P2, 33}, {P3, 67}}));
  EXPECT_EQ(code_of([&] { allocate_proportional(s, triangle(), H2, frac(1, 2)); }),
            ErrorCode::InvalidArgument);
  PoolState off({frac(1, 3), 1, 1});
  EXPECT_THROW(off.set_resolution(1), Error);
}

TEST(Resolution, LongChurnStaysOnGrid) {
  std::mt19937 rng(3);
  PoolState state = PoolState::uniform(3, 500);
  const Gb step = Gb(1) / Gb(1 << 20);
  state.set_resolution(step);
  std::vector<AllocationId> live;
  int failures = 0;
  for (int i = 0; i < 5000; ++i) {
    if (!live.empty() && rng() % 3 == 0) {
      const std::size_t k = rng() % live.size();
      free_allocation(state, live[k]);
      live.erase(live.begin() + static_cast<long>(k));
      continue;
    }
    try {
      live.push_back(allocate(state, triangle(), HostId{rng() % 3}, long(rng() % 40 + 1),
                              AllocationPolicy::Proportional).id);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::InsufficientCapacity);
      ++failures;
    }
  }
  Gb held = 0;
  for (const auto& [id, entry] : state.ledger()) {
    for (const Share& sh : entry.plan.shares) {
      EXPECT_EQ(denominator(Gb(sh.gb / step)), 1);
      held += sh.gb;
    }
  }
  EXPECT_EQ(state.free_capacity() + held, 1500);
  EXPECT_GT(failures, 0);
}

TEST(Resolution, ReplayRejectsOffGridRequests) {
  PoolState state = PoolState::uniform(3, 100);
  state.set_resolution(1);
  const std::vector<TraceEvent> events = {alloc_event(H1, 10, 1)};
  std::vector<TraceEvent> bad = events;
  bad[0].gb = frac(21, 2);
  EXPECT_EQ(code_of([&] { replay_trace(triangle(), state, bad); }), ErrorCode::MalformedTrace);
  EXPECT_EQ(replay_trace(triangle(), state, events).events[0].status, EventStatus::Allocated);
}
