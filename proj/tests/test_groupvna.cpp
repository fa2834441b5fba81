#include <gtest/gtest.h>

#include <array>
#include <functional>
#include <random>
#include <set>

#include "vnlab/catalog.hpp"
#include "vnlab/groupvna.hpp"

using namespace vnlab;

namespace {

// Irreducible degrees from group data alone: |G:G'| linear characters, and
// the remaining classes carry degrees >= 2 dividing |G| whose squares fill
// up |G|. Returns every solution so the caller can insist on uniqueness.
std::vector<std::vector<int>> degree_candidates(const FinGroup& g) {
  const int order = static_cast<int>(g.order());
  const int linear = order / static_cast<int>(derived_subgroup(g).size());
  const int classes = static_cast<int>(conjugacy_classes(g).size());
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(linear), 1);
  std::function<void(int, int, int)> go = [&](int left, int remaining, int min_deg) {
    if (remaining == 0) {
      if (left == 0) out.push_back(cur);
      return;
    }
    for (int n = min_deg; n * n <= left; ++n) {
      if (order % n) continue;
      cur.push_back(n);
      go(left - n * n, remaining - 1, n);
      cur.pop_back();
    }
  };
  go(order - linear, classes - linear, 2);
  return out;
}

// Free group words as strings: lowercase generators, uppercase inverses.
std::string reduce(const std::string& w) {
  std::string out;
  for (char c : w) {
    if (!out.empty() && out.back() != c && std::tolower(out.back()) == std::tolower(c)) out.pop_back();
    else out.push_back(c);
  }
  return out;
}
std::string invert_word(std::string w) {
  std::reverse(w.begin(), w.end());
  for (auto& c : w) c = std::islower(c) ? static_cast<char>(std::toupper(c)) : static_cast<char>(std::tolower(c));
  return w;
}

using Mat3 = std::array<long long, 9>;
Mat3 mul3(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c[i * 3 + j] += a[i * 3 + k] * b[k * 3 + j];
  return c;
}

}  // namespace

TEST(LeftRegular, Examples) {
  const auto z2 = analyze(left_regular_algebra(cyclic_group(2)));
  ASSERT_EQ(z2.blocks.size(), 2u);
  for (const auto& b : z2.blocks) {
    EXPECT_EQ(b.size, 1);
    EXPECT_NEAR(b.weight, 0.5, 1e-12);
  }
  const auto s3 = analyze(left_regular_algebra(symmetric_group(3)));
  EXPECT_EQ(s3.center_dim, 3);
  std::vector<std::pair<int, double>> got;
  for (const auto& b : s3.blocks) got.push_back({b.size, b.weight});
  std::sort(got.begin(), got.end());
  ASSERT_EQ(got.size(), 3u);
  EXPECT_EQ(got[0].first, 1);
  EXPECT_NEAR(got[0].second, 1.0 / 6, 1e-12);
  EXPECT_EQ(got[1].first, 1);
  EXPECT_NEAR(got[1].second, 1.0 / 6, 1e-12);
  EXPECT_EQ(got[2].first, 2);
  EXPECT_NEAR(got[2].second, 2.0 / 3, 1e-12);
  const auto triv = left_regular_algebra(trivial_group());
  EXPECT_EQ(triv.dimension(), 1);
  EXPECT_TRUE(analyze(triv).is_factor);
}

TEST(LeftRegular, TraceIsDeltaAtIdentity) {
  const auto g = quaternion_group();
  const auto a = left_regular_algebra(g);
  for (FinGroup::Element x = 0; x < g.order(); ++x)
    EXPECT_NEAR(std::abs(a.trace(left_regular_unitary(g, x)) - (x == g.identity() ? 1.0 : 0.0)), 0.0, 1e-12);
}

TEST(LeftRegular, CatalogBlocksMatchCharacterDegrees) {
  for (const auto& g : group_algebra_catalog()) {
    const auto a = left_regular_algebra(g);
    EXPECT_EQ(a.dimension(), static_cast<Index>(g.order())) << g.name();
    const auto r = analyze(a);
    EXPECT_EQ(r.center_dim, static_cast<Index>(conjugacy_classes(g).size())) << g.name();
    EXPECT_EQ(r.is_factor, g.order() == 1) << g.name();
    const auto candidates = degree_candidates(g);
    ASSERT_EQ(candidates.size(), 1u) << g.name();
    std::vector<int> degrees = candidates[0];
    std::vector<int> sizes;
    for (const auto& b : r.blocks) {
      sizes.push_back(b.size);
      EXPECT_NEAR(b.weight, static_cast<double>(b.size * b.size) / static_cast<double>(g.order()), 1e-9) << g.name();
    }
    std::sort(sizes.begin(), sizes.end());
    std::sort(degrees.begin(), degrees.end());
    EXPECT_EQ(sizes, degrees) << g.name();
  }
}

TEST(LeftRegular, RespectsCap) {
  Caps caps;
  caps.left_regular = 5;
  EXPECT_THROW(left_regular_algebra(cyclic_group(6), caps), CapExceeded);
}

TEST(Ball, Counts) {
  const auto f2 = free_group(2);
  EXPECT_EQ(ball(f2, 0).size(), 1u);
  for (int r = 1; r <= 5; ++r) {
    std::size_t expect = 1, layer = 4;
    for (int k = 1; k <= r; ++k, layer *= 3) expect += layer;
    EXPECT_EQ(ball(f2, r).size(), expect);
  }
  const auto z2 = free_abelian_group(2);
  for (int r = 0; r <= 6; ++r) EXPECT_EQ(ball(z2, r).size(), static_cast<std::size_t>(2 * r * r + 2 * r + 1));
  EXPECT_EQ(ball(sl3z(), 0).size(), 1u);
}

TEST(Ball, SanovPairIsFree) {
  // distinct reduced words in A, B give distinct matrices
  for (int r = 1; r <= 5; ++r) EXPECT_EQ(ball(sl2z_ab(), r).size(), ball(free_group(2), r).size());
}

TEST(Ball, RespectsCap) {
  Caps caps;
  caps.ball = 100;
  EXPECT_THROW(ball(free_group(3), 4, caps), CapExceeded);
  EXPECT_THROW(ball(free_group(2), -1), InputError);
}

TEST(Oracle, NormalFormIsCongruence) {
  std::mt19937_64 rng(kDefaultSeed);
  for (const auto& name : {"F2", "F3", "Z3", "SL2Z", "SL3Z", "SL2Z:A,B", "F2xZ2"}) {
    const auto g = named_oracle(name);
    const auto elems = ball(g, 3);
    std::uniform_int_distribution<std::size_t> pick(0, elems.size() - 1);
    for (int t = 0; t < 300; ++t) {
      const auto& a = elems[pick(rng)];
      const auto& b = elems[pick(rng)];
      const auto& c = elems[pick(rng)];
      EXPECT_EQ(g.mul(g.mul(a, b), c), g.mul(a, g.mul(b, c))) << name;
      EXPECT_EQ(g.mul(a, g.inv(a)), g.identity()) << name;
      EXPECT_EQ(g.mul(g.identity(), a), a) << name;
      // two words for the same element: a and (a b) b^-1
      const auto a2 = g.mul(g.mul(a, b), g.inv(b));
      EXPECT_EQ(a2, a) << name;
      EXPECT_EQ(g.mul(a2, c), g.mul(a, c)) << name;
      EXPECT_EQ(g.mul(c, a2), g.mul(c, a)) << name;
    }
  }
}

TEST(Oracle, Registry) {
  EXPECT_EQ(named_oracle("F2").name(), "F2");
  EXPECT_EQ(named_oracle("Z2").generators().size(), 2u);
  EXPECT_EQ(named_oracle("SL3Z").generators().size(), 6u);
  EXPECT_EQ(named_oracle("SL2ZxF2").name(), "SL2ZxF2");
  EXPECT_THROW(named_oracle("Q8"), InputError);
  EXPECT_THROW(named_oracle("F"), InputError);
  EXPECT_THROW(named_oracle("F0"), InputError);
}

TEST(ICC, AbelianAlwaysOne) {
  for (const auto& name : {"Z1", "Z2", "Z3"})
    for (int r = 1; r <= 2; ++r)
      for (int big = 0; big <= 6; big += 3) {
        const auto c = icc_certificate(named_oracle(name), r, big, 2);
        EXPECT_EQ(c.min_conjugates, 1u) << name;
        EXPECT_FALSE(c.passed);
      }
  const auto z2 = icc_certificate(free_abelian_group(2), 2, 10, 2);
  EXPECT_EQ(z2.min_conjugates, 1u);
  EXPECT_FALSE(z2.passed);
}

TEST(ICC, FreeGroupAgainstStringWords) {
  const auto c = icc_certificate(free_group(2), 1, 3, 10);
  EXPECT_TRUE(c.passed);
  // independent: words over {a,b,A,B} of length <= 3, reduced, conjugating a, b, A, B
  std::set<std::string> big{""};
  for (int k = 0; k < 3; ++k) {
    std::set<std::string> next = big;
    for (const auto& w : big)
      for (char s : std::string("abAB")) next.insert(reduce(w + s));
    big = next;
  }
  ASSERT_EQ(big.size(), 53u);
  std::size_t least = SIZE_MAX;
  for (char s : std::string("abAB")) {
    std::set<std::string> conj;
    for (const auto& h : big) conj.insert(reduce(h + s + invert_word(h)));
    least = std::min(least, conj.size());
  }
  EXPECT_EQ(c.min_conjugates, least);
  EXPECT_GE(least, 10u);
}

TEST(ICC, SL3ZAgainstFixedWidthMatrices) {
  const auto c = icc_certificate(sl3z(), 1, 2, 5);
  EXPECT_TRUE(c.passed);
  std::vector<Mat3> gens;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      for (int s : {1, -1}) {
        Mat3 m{1, 0, 0, 0, 1, 0, 0, 0, 1};
        m[i * 3 + j] = s;
        gens.push_back(m);
      }
    }
  std::set<Mat3> big{{1, 0, 0, 0, 1, 0, 0, 0, 1}};
  for (int k = 0; k < 2; ++k) {
    auto next = big;
    for (const auto& w : big)
      for (const auto& s : gens) next.insert(mul3(w, s));
    big = next;
  }
  // pair each h with its inverse by search
  std::size_t least = SIZE_MAX;
  for (const auto& x : gens) {
    std::set<Mat3> conj;
    for (const auto& h : big) {
      // inverse of h: adjugate since det = 1
      Mat3 hi{};
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          const int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
          hi[i * 3 + j] = h[r0 * 3 + c0] * h[r1 * 3 + c1] - h[r0 * 3 + c1] * h[r1 * 3 + c0];
        }
      ASSERT_EQ(mul3(h, hi), (Mat3{1, 0, 0, 0, 1, 0, 0, 0, 1}));
      conj.insert(mul3(mul3(h, x), hi));
    }
    least = std::min(least, conj.size());
  }
  EXPECT_EQ(c.min_conjugates, least);
}

TEST(ICC, MonotoneInOuterRadius) {
  for (const auto& name : {"F2", "SL2Z", "SL2Z:A,B", "F2xZ1"}) {
    const auto g = named_oracle(name);
    std::uint64_t prev = 0;
    for (int big = 0; big <= 3; ++big) {
      const auto c = icc_certificate(g, 1, big, 1);
      EXPECT_GE(c.min_conjugates, 1u);
      EXPECT_GE(c.min_conjugates, prev) << name;
      prev = c.min_conjugates;
    }
  }
}

TEST(ICC, ProductWithAbelianFactorFails) {
  // (e, z) is central in F2 x Z
  const auto c = icc_certificate(named_oracle("F2xZ1"), 1, 3, 2);
  EXPECT_EQ(c.min_conjugates, 1u);
  EXPECT_FALSE(c.passed);
  EXPECT_FALSE(c.summary().empty());
}
