#include <gtest/gtest.h>

#include <map>
#include <random>

#include "octopus/error.hpp"
#include "octopus/placement.hpp"

using namespace octopus;

namespace {

constexpr MhdId P1{0}, P2{1}, P3{2}, P4{3};

AllocationPlan plan(const Gb& request, std::vector<Share> shares) {
  return AllocationPlan{request, std::move(shares)};
}

}  // namespace

TEST(Interleave, TwoToOne) {
  const InterleavePlan p(plan(3, {{P2, 1}, {P3, 2}}), PageSize::k1GiB);
  EXPECT_EQ(p.page_count(), 3u);
  EXPECT_EQ(p.sequence(3), (std::vector<MhdId>{P3, P2, P3}));
  EXPECT_EQ(p.sequence(6), (std::vector<MhdId>{P3, P2, P3, P3, P2, P3}));
}

TEST(Interleave, SingleMhd) {
  const InterleavePlan p(plan(1, {{P4, 1}}), PageSize::k2MiB);
  EXPECT_EQ(p.page_count(), 512u);
  for (MhdId m : p.sequence(600)) EXPECT_EQ(m, P4);
}

TEST(Interleave, EqualSharesRotateInOrder) {
  const InterleavePlan p(plan(4, {{P1, 1}, {P2, 1}, {P3, 1}, {P4, 1}}), PageSize::k1GiB);
  EXPECT_EQ(p.sequence(8), (std::vector<MhdId>{P1, P2, P3, P4, P1, P2, P3, P4}));
}

TEST(Interleave, Errors) {
  try {
    InterleavePlan(plan(0, {}), PageSize::k4KiB);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyPlan);
  }
  const Gb third = Gb(1) / Gb(3);
  EXPECT_THROW(InterleavePlan(plan(third, {{P1, third}}), PageSize::k1GiB), Error);
}

TEST(Interleave, PageCount) {
  EXPECT_EQ(interleave_plan(plan(100, {{P1, 100}}), PageSize::k2MiB).page_count(), 51200u);
  EXPECT_EQ(interleave_plan(plan(1, {{P1, 1}}), PageSize::k4KiB).page_count(), 262144u);
}

TEST(Interleave, PrefixBalanceRandom) {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    std::vector<Share> shares;
    long total = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const long s = 1 + static_cast<long>(rng() % 1000);
      shares.push_back({MhdId{i}, s});
      total += s;
    }
    const InterleavePlan p(plan(total, shares), PageSize::k1GiB);
    std::map<std::size_t, long> assigned;
    long t = 0;
    for (MhdId m : p.sequence(3000)) {
      ++assigned[m.index];
      ++t;
      for (const Share& s : shares) {
        // |assigned - t * w| < 1 with w = s / total, checked as integers.
        const long diff = assigned[s.mhd.index] * total - t * s.gb.convert_to<long>();
        ASSERT_LT(std::abs(diff), total) << "trial " << trial << " page " << t;
      }
    }
  }
}

TEST(QueuePlan, Triangle) {
  const PodTopology t = construct(derive_regular_params(2, 2));
  const QueuePlan q = queue_plan(t, 1);
  ASSERT_EQ(q.regions.size(), 3u);
  for (const PairRegion& r : q.regions) {
    EXPECT_TRUE(t.connected(r.a, r.mhd));
    EXPECT_TRUE(t.connected(r.b, r.mhd));
  }
  for (const MhdQueueLoad& load : q.per_mhd) {
    EXPECT_EQ(load.regions, 1u);
    EXPECT_EQ(load.gb, 1);
  }
}

TEST(QueuePlan, ThirteenHostRegular) {
  const PodTopology t = construct(derive_regular_params(4, 4));
  const QueuePlan q = queue_plan(t, 1);
  EXPECT_EQ(q.regions.size(), 78u);
  ASSERT_EQ(q.per_mhd.size(), 13u);
  for (const MhdQueueLoad& load : q.per_mhd) EXPECT_EQ(load.gb, 6);
  for (std::size_t i = 1; i < q.regions.size(); ++i) {
    const auto& a = q.regions[i - 1];
    const auto& b = q.regions[i];
    EXPECT_TRUE(std::pair(a.a, a.b) < std::pair(b.a, b.b));
  }
}

TEST(QueuePlan, SymmetricBalances) {
  const QueuePlan one = queue_plan(construct_symmetric(2, 1), 2);
  ASSERT_EQ(one.regions.size(), 1u);
  EXPECT_EQ(one.regions[0].mhd, P1);
  EXPECT_EQ(one.per_mhd[0].gb, 2);

  const QueuePlan q = queue_plan(construct_symmetric(8, 4), 1);
  EXPECT_EQ(q.regions.size(), 28u);
  for (const MhdQueueLoad& load : q.per_mhd) EXPECT_EQ(load.regions, 7u);
}

TEST(QueuePlan, Errors) {
  EXPECT_THROW(queue_plan(construct(derive_dense_params(4, 4, 2)), 1), Error);
  EXPECT_THROW(queue_plan(construct_symmetric(2, 1), 0), Error);
  // H1 and H2 share nothing.
  const PodTopology split(TopologyKind::RegularOctopus, 2, 2,
                          {{HostId{0}, MhdId{0}}, {HostId{1}, MhdId{1}}}, std::nullopt);
  try {
    queue_plan(split, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoCommonMhd);
  }
}
