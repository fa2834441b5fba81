#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "vnlab/catalog.hpp"
#include "vnlab/crossed.hpp"

using namespace vnlab;

namespace {

FiniteAction z2_swap() { return make_action(cyclic_group(2), FiniteProbSpace::uniform(2), {{0, 1}, {1, 0}}); }
FiniteAction z2_trivial(std::size_t atoms) {
  Permutation id(atoms);
  std::iota(id.begin(), id.end(), 0u);
  return make_action(cyclic_group(2), FiniteProbSpace::uniform(atoms), {id, id});
}

const std::vector<CatalogEntry>& catalog() {
  static const auto cat = action_catalog();
  return cat;
}

}  // namespace

TEST(Crossed, SwapGivesFactorM2) {
  const auto cp = crossed_product(z2_swap());
  EXPECT_EQ(cp.algebra().dimension(), 4);
  const auto r = analyze(cp.algebra());
  EXPECT_EQ(r.center_dim, 1);
  EXPECT_TRUE(r.is_factor);
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_EQ(r.blocks[0].size, 2);
  EXPECT_NEAR(r.blocks[0].weight, 1.0, 1e-12);
}

TEST(Crossed, TrivialGroupGivesDiagonal) {
  const auto a = trivial_action(trivial_group(), FiniteProbSpace::uniform(3));
  const auto cp = crossed_product(a);
  EXPECT_EQ(analyze(cp.algebra()).center_dim, 3);
  EXPECT_TRUE(same_span(cp.algebra(), cp.diagonal(), 1e-9));
}

TEST(Crossed, TrivialActionOnOnePointIsGroupAlgebra) {
  const auto r = analyze(crossed_product(z2_trivial(1)).algebra());
  EXPECT_EQ(r.center_dim, 2);
  EXPECT_FALSE(r.is_factor);
  EXPECT_EQ(r.dimension, 2);
}

TEST(Crossed, TraceOfIndicatorMonomial) {
  const auto cp = crossed_product(z2_swap());
  ComplexVector f = ComplexVector::Zero(2);
  f(0) = 1;
  std::vector<ComplexVector> coeffs{f, ComplexVector::Zero(2)};
  EXPECT_NEAR(std::abs(cp.algebra().trace(cp.monomial_sum(coeffs)) - 0.5), 0.0, 1e-12);
}

TEST(Crossed, RespectsCap) {
  Caps caps;
  caps.crossed_dim = 3;
  EXPECT_THROW(crossed_product(z2_swap(), caps), CapExceeded);
}

TEST(Crossed, UnitaryRepresentation) {
  const auto cp = crossed_product(regular_action(symmetric_group(3), 2));
  const auto& g = cp.action().group();
  for (FinGroup::Element a = 0; a < g.order(); ++a) {
    const ComplexMatrix ua = cp.unitary(a);
    EXPECT_LT((ua * ua.adjoint() - ComplexMatrix::Identity(cp.dim(), cp.dim())).norm(), 1e-12);
    for (FinGroup::Element b = 0; b < g.order(); ++b) EXPECT_LT((ua * cp.unitary(b) - cp.unitary(g.mul(a, b))).norm(), 1e-12);
  }
}

TEST(Cartan, Examples) {
  const auto swap = cartan_report(crossed_product(z2_swap()));
  EXPECT_TRUE(swap.is_masa);
  EXPECT_TRUE(swap.normalizer_dense);
  const auto triv = cartan_report(crossed_product(z2_trivial(2)));
  EXPECT_FALSE(triv.is_masa);
  EXPECT_EQ(triv.relative_commutant_dim, 4);
  EXPECT_EQ(triv.diagonal_dim, 2);
  EXPECT_TRUE(triv.normalizer_dense);
}

TEST(FeldmanMoore, Examples) {
  const auto z4 = regular_action(cyclic_group(4));
  const auto v4 = regular_action(direct_product(cyclic_group(2), cyclic_group(2)));
  const auto a = feldman_moore_check(z4, v4);
  EXPECT_TRUE(a.oe);
  EXPECT_TRUE(a.cartan_equal);
  EXPECT_TRUE(a.consistent);
  const auto b = feldman_moore_check(z2_swap(), z2_trivial(2));
  EXPECT_FALSE(b.oe);
  EXPECT_FALSE(b.cartan_equal);
  EXPECT_TRUE(b.consistent);
  EXPECT_TRUE(feldman_moore_check(z4, z4).consistent);
}

TEST(CrossedCatalog, IdentitiesTraceAndCartan) {
  std::mt19937_64 rng(kDefaultSeed);
  for (const auto& e : catalog()) {
    const auto cp = crossed_product(e.action);
    const auto rep = action_report(e.action);
    const auto ids = check_monomial_identities(cp);
    EXPECT_LT(ids.product_error, 1e-9) << e.name;
    EXPECT_LT(ids.involution_error, 1e-9) << e.name;
    const auto& a = cp.algebra();
    EXPECT_EQ(a.dimension(), cp.dim()) << e.name;
    for (int k = 0; k < 3; ++k) {
      const ComplexMatrix x = a.random_element(rng), y = a.random_element(rng);
      EXPECT_LT(std::abs(a.trace(x * y) - a.trace(y * x)), 1e-9 * std::max(1.0, x.norm() * y.norm())) << e.name;
    }
    const auto report = analyze(a);
    const auto cartan = cartan_report(cp);
    EXPECT_EQ(cartan.is_masa, rep.is_free) << e.name;
    EXPECT_TRUE(cartan.normalizer_dense) << e.name;
    EXPECT_TRUE(cartan.cartan_invariant == rep.signature) << e.name << " " << cartan.cartan_invariant.str() << " vs "
                                                          << rep.signature.str();
    if (rep.is_free) {
      EXPECT_EQ(report.is_factor, rep.is_ergodic) << e.name;
      // blocks: one M_|orbit| per orbit with weight = orbit mass
      std::vector<std::pair<int, double>> expect, got;
      for (const auto& o : rep.orbits) {
        double m = 0;
        for (auto x : o) m += e.action.space().weight(x).value();
        expect.push_back({static_cast<int>(o.size()), m});
      }
      for (const auto& b : report.blocks) got.push_back({b.size, b.weight});
      std::sort(expect.begin(), expect.end());
      std::sort(got.begin(), got.end());
      ASSERT_EQ(expect.size(), got.size()) << e.name;
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(expect[i].first, got[i].first) << e.name;
        EXPECT_NEAR(expect[i].second, got[i].second, 1e-9) << e.name;
      }
    }
  }
}
