#include <gtest/gtest.h>

#include <random>

#include "vnlab/redux.hpp"

using namespace vnlab;

namespace {

// eventually equal iff equal on a window far past every prefix and period
bool window_oracle(const EventuallyPeriodicBits& x, const EventuallyPeriodicBits& y) {
  for (std::size_t i = 120; i < 240; ++i)
    if (x.at(i) != y.at(i)) return false;
  return true;
}

}  // namespace

TEST(E0, Examples) {
  const EventuallyPeriodicBits a("", "01"), b("0", "10"), z("", "0"), o("", "1"), t("111", "0");
  EXPECT_TRUE(e0_equivalent(a, a));
  EXPECT_TRUE(e0_equivalent(a, b));
  EXPECT_FALSE(e0_equivalent(z, o));
  EXPECT_TRUE(e0_equivalent(t, z));
  EXPECT_FALSE(e0_equivalent(a, EventuallyPeriodicBits("1", "01")));
  EXPECT_THROW(EventuallyPeriodicBits("", ""), InputError);
  EXPECT_THROW(EventuallyPeriodicBits("2", "0"), InputError);
}

TEST(E0, EquivalenceRelationExhaustive) {
  const auto xs = all_eventually_periodic(3, 3);
  const std::size_t n = xs.size();
  ASSERT_EQ(n, 15u * 14u);
  std::vector<std::vector<bool>> rel(n, std::vector<bool>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      rel[i][j] = e0_equivalent(xs[i], xs[j]);
      ASSERT_EQ(rel[i][j], window_oracle(xs[i], xs[j]));
    }
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_TRUE(rel[i][i]);
    for (std::size_t j = 0; j < n; ++j) {
      EXPECT_EQ(rel[i][j], rel[j][i]);
      if (!rel[i][j]) continue;
      for (std::size_t k = 0; k < n; ++k)
        if (rel[j][k]) ASSERT_TRUE(rel[i][k]);
    }
  }
}

TEST(E0, RepresentationInvariance) {
  const auto xs = all_eventually_periodic(2, 3);
  // same sequence: period doubled, or one period step moved into the prefix
  const auto variants = [](const EventuallyPeriodicBits& x) {
    std::vector<EventuallyPeriodicBits> out;
    out.emplace_back(x.prefix, x.period + x.period);
    out.emplace_back(x.prefix + x.period.substr(0, 1), x.period.substr(1) + x.period.substr(0, 1));
    return out;
  };
  for (const auto& x : xs)
    for (const auto& xv : variants(x)) {
      for (std::size_t i = 0; i < 50; ++i) ASSERT_EQ(x.at(i), xv.at(i));
      for (const auto& y : xs) {
        EXPECT_EQ(e0_equivalent(x, y), e0_equivalent(xv, y));
        for (const auto& yv : variants(y)) EXPECT_EQ(e0_equivalent(x, y), e0_equivalent(xv, yv));
      }
    }
}

TEST(E0, CanonicalTailIsCompleteInvariant) {
  const auto r = e0_reduction(all_eventually_periodic(3, 3));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.pairs_checked, 210u * 209u / 2);
}

TEST(Reduction, Examples) {
  const std::vector<int> xs{0, 1, 2, 3, 4, 5};
  const std::function<bool(const int&, const int&)> mod3 = [](const int& a, const int& b) { return a % 3 == b % 3; };
  const auto same = verify_reduction<int, int>(xs, mod3, [](const int& a) { return a % 3; },
                                              [](const int& a, const int& b) { return a == b; });
  EXPECT_TRUE(same.holds);
  EXPECT_EQ(same.pairs_checked, 15u);
  const auto constant = verify_reduction<int, int>(xs, mod3, [](const int&) { return 0; },
                                                  [](const int& a, const int& b) { return a == b; });
  EXPECT_FALSE(constant.holds);
  ASSERT_FALSE(constant.counterexamples.empty());
  EXPECT_EQ(constant.counterexamples[0].side, Counterexample::Side::FOnly);
  EXPECT_EQ(constant.total_counterexamples, 15u - 3u);
  const auto split = verify_reduction<int, int>(xs, mod3, [](const int& a) { return a; },
                                               [](const int& a, const int& b) { return a == b; });
  EXPECT_FALSE(split.holds);
  EXPECT_EQ(split.counterexamples[0].side, Counterexample::Side::EOnly);
}

TEST(Reduction, CounterexamplesCapped) {
  std::vector<int> xs(20);
  std::iota(xs.begin(), xs.end(), 0);
  const auto r = verify_reduction<int, int>(xs, [](const int&, const int&) { return false; }, [](const int&) { return 0; },
                                           [](const int&, const int&) { return true; });
  EXPECT_EQ(r.total_counterexamples, 190u);
  EXPECT_EQ(r.counterexamples.size(), ReductionReport::kMaxCounterexamples);
}

TEST(Reduction, OrderIndependentAndDeterministic) {
  auto xs = all_eventually_periodic(2, 2);
  const std::function<bool(const EventuallyPeriodicBits&, const EventuallyPeriodicBits&)> e = e0_equivalent;
  const std::function<std::size_t(const EventuallyPeriodicBits&)> f = [](const EventuallyPeriodicBits& x) {
    return x.period.size();
  };
  const std::function<bool(const std::size_t&, const std::size_t&)> eq = [](const std::size_t& a, const std::size_t& b) {
    return a == b;
  };
  const auto base = verify_reduction(xs, e, f, eq);
  std::mt19937_64 rng(6);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(xs.begin(), xs.end(), rng);
    const auto r = verify_reduction(xs, e, f, eq);
    EXPECT_EQ(r.holds, base.holds);
    EXPECT_EQ(r.total_counterexamples, base.total_counterexamples);
    EXPECT_EQ(verify_reduction(xs, e, f, eq).counterexamples.size(), r.counterexamples.size());
  }
}

TEST(Reduction, MeklerFingerprintOnNiceGraphs) {
  const auto graphs = nice_graphs(4);
  ASSERT_FALSE(graphs.empty());
  EXPECT_TRUE(mekler_fingerprint_reduction(graphs).holds);
}

TEST(Reduction, FeldmanMooreOnSmallActions) {
  std::vector<FiniteAction> actions;
  for (const auto& e : action_catalog())
    if (e.action.space().size() <= 4) actions.push_back(e.action);
  ASSERT_GT(actions.size(), 10u);
  const auto r = feldman_moore_reduction(actions);
  EXPECT_TRUE(r.holds);
}
