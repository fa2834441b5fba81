#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "vnlab/itpfi.hpp"

using namespace vnlab;

namespace {

// 1 - |1 + lambda^(1+it)| / (1 + lambda)
double powers_term(double lambda, double t) {
  const std::complex<double> z = 1.0 + lambda * std::polar(1.0, t * std::log(lambda));
  return 1.0 - std::abs(z) / (1.0 + lambda);
}

}  // namespace

TEST(Powers, EigenvaluesFromDensityMatrix) {
  const auto e = powers_eigenvalues(0.5);
  EXPECT_NEAR(e[0], 2.0 / 3, 1e-15);
  EXPECT_NEAR(e[1], 1.0 / 3, 1e-15);
  const auto rho = powers_density_matrix(0.5);
  EXPECT_NEAR(rho(0, 0), 2.0 / 3, 1e-15);
  EXPECT_NEAR(rho(1, 1), 1.0 / 3, 1e-15);
  EXPECT_EQ(rho(0, 1), 0.0);
  for (double l : {0.01, 0.25, 0.9}) EXPECT_NEAR(powers_eigenvalues(l)[0] + powers_eigenvalues(l)[1], 1.0, 1e-15);
  EXPECT_THROW(powers_spec(0.0), InputError);
  EXPECT_THROW(powers_spec(1.0), InputError);
}

TEST(Spec, Validation) {
  EXPECT_THROW(ITPFISpec::constant({0.5, 0.6}), InputError);
  EXPECT_THROW(ITPFISpec::constant({1.5, -0.5}), InputError);
  EXPECT_THROW(ITPFISpec::periodic({}, {}), InputError);
  const auto e = ITPFISpec::explicit_list({{0.5, 0.5}});
  EXPECT_THROW(e.factor(1), InputError);
  const auto p = ITPFISpec::periodic({{1.0}}, {{0.5, 0.5}, {0.25, 0.75}});
  EXPECT_EQ(p.factor(0).size(), 1u);
  EXPECT_EQ(p.factor(3), (EigenvalueList{0.5, 0.5}));
  EXPECT_EQ(p.factor(4), (EigenvalueList{0.25, 0.75}));
}

TEST(Term, Examples) {
  const auto s = powers_spec(0.5);
  EXPECT_EQ(tset_term(s, 0, 0.0), 0.0);
  EXPECT_NEAR(tset_term(s, 7, 2 * M_PI / std::log(2.0)), 0.0, 1e-12);
  const double v = tset_term(s, 0, 1.0);
  EXPECT_GT(v, 0.0);
  for (std::size_t i = 1; i < 20; ++i) EXPECT_EQ(tset_term(s, i, 1.0), v);
  for (double l : {0.25, 1.0 / 3, 0.5, 2.0 / 3})
    for (double t : {-7.0, -1.0, 0.3, 2.0, 11.5}) EXPECT_NEAR(tset_term(powers_spec(l), 0, t), powers_term(l, t), 1e-14);
}

TEST(Term, RangeAndEvenness) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> ut(-50, 50), uw(0.01, 1);
  for (int k = 0; k < 500; ++k) {
    EigenvalueList a{uw(rng), uw(rng), uw(rng)};
    const double s = a[0] + a[1] + a[2];
    for (auto& x : a) x /= s;
    a[2] = 1.0 - a[0] - a[1];
    const auto spec = ITPFISpec::constant(a);
    const double t = ut(rng);
    const double v = tset_term(spec, 0, t);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
    EXPECT_NEAR(v, tset_term(spec, 0, -t), 1e-14);
  }
}

TEST(Membership, Examples) {
  const auto s = powers_spec(0.5);
  EXPECT_EQ(tset_membership(s, 0.0).kind, TsetVerdict::Kind::In);
  EXPECT_EQ(tset_membership(s, 1.0).kind, TsetVerdict::Kind::Out);
  for (double t : powers_lattice(0.5, -5, 5)) EXPECT_EQ(tset_membership(s, t).kind, TsetVerdict::Kind::In);
  const auto e = ITPFISpec::explicit_list({{0.5, 0.5}, {2.0 / 3, 1.0 / 3}});
  const auto v = tset_membership(e, 1.0);
  EXPECT_EQ(v.kind, TsetVerdict::Kind::Undecided);
  EXPECT_EQ(v.terms, 2u);
  EXPECT_NEAR(v.partial_sum, tset_term(e, 0, 1.0) + tset_term(e, 1, 1.0), 1e-15);
  // prefix terms do not affect convergence
  const auto p = ITPFISpec::periodic({{0.9, 0.1}}, {powers_eigenvalues(0.5)});
  EXPECT_EQ(tset_membership(p, 2 * M_PI / std::log(2.0)).kind, TsetVerdict::Kind::In);
}

TEST(Membership, ClosedFormAgreesOnLatticeAndRandomPoints) {
  std::mt19937_64 rng(20071113);
  std::uniform_real_distribution<double> ut(-20, 20);
  for (double l : {0.25, 1.0 / 3, 0.5, 2.0 / 3}) {
    const auto s = powers_spec(l);
    for (double t : powers_lattice(l, -5, 5)) {
      EXPECT_TRUE(powers_closed_form(l, t));
      EXPECT_EQ(tset_membership(s, t).kind, TsetVerdict::Kind::In);
    }
    for (int k = 0; k < 100; ++k) {
      const double t = ut(rng);
      EXPECT_EQ(powers_closed_form(l, t), tset_membership(s, t).kind == TsetVerdict::Kind::In) << l << " " << t;
    }
  }
}

TEST(Membership, SubgroupProperty) {
  // two-block spec: T = (2 pi / ln 2) Z
  const auto spec = ITPFISpec::periodic({}, {powers_eigenvalues(0.5), powers_eigenvalues(0.25)});
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<int> m(-6, 6);
  const double step = 2 * M_PI / std::log(2.0);
  for (int k = 0; k < 200; ++k) {
    const double t1 = m(rng) * step, t2 = m(rng) * step;
    ASSERT_EQ(tset_membership(spec, t1).kind, TsetVerdict::Kind::In);
    ASSERT_EQ(tset_membership(spec, t2).kind, TsetVerdict::Kind::In);
    EXPECT_EQ(tset_membership(spec, t1 + t2).kind, TsetVerdict::Kind::In);
    EXPECT_EQ(tset_membership(spec, -t1).kind, TsetVerdict::Kind::In);
  }
  // half steps belong to powers(1/4) but not to the two-block spec
  EXPECT_EQ(tset_membership(powers_spec(0.25), step / 2).kind, TsetVerdict::Kind::In);
  EXPECT_EQ(tset_membership(spec, step / 2).kind, TsetVerdict::Kind::Out);
}

TEST(Scan, RowsAndCsv) {
  const auto rows = tset_scan(powers_spec(0.5), powers_lattice(0.5, 0, 5));
  ASSERT_EQ(rows.size(), 6u);
  for (const auto& r : rows) EXPECT_EQ(r.verdict.kind, TsetVerdict::Kind::In);
  const auto zero = tset_scan(powers_spec(0.3), {0.0});
  EXPECT_EQ(zero[0].verdict.kind, TsetVerdict::Kind::In);
  const double g = 2 * M_PI / std::log(2.0);
  for (const auto& r : tset_scan(powers_spec(0.5), {std::sqrt(2.0) * g, M_PI * g, std::exp(1.0) * g}))
    EXPECT_EQ(r.verdict.kind, TsetVerdict::Kind::Out);
  const auto csv = tset_csv(rows);
  EXPECT_EQ(csv.substr(0, 22), "t,verdict,maxBlockTerm");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Tensor, Examples) {
  const auto s = powers_spec(0.5);
  const auto tt = tensor_spec(s, s);
  EXPECT_EQ(tt.kind(), ITPFISpec::Kind::EventuallyPeriodic);
  ASSERT_EQ(tt.cycle().size(), 2u);
  EXPECT_EQ(tt.cycle()[0], powers_eigenvalues(0.5));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> ut(-20, 20);
  std::vector<double> grid = powers_lattice(0.5, -3, 3);
  for (int k = 0; k < 50; ++k) grid.push_back(ut(rng));
  const auto triv = ITPFISpec::constant({1.0});
  for (double t : grid) {
    EXPECT_EQ(tset_membership(tt, t).kind, tset_membership(s, t).kind);
    EXPECT_EQ(tset_membership(tensor_spec(s, triv), t).kind, tset_membership(s, t).kind);
  }
  const auto mixed = tensor_spec(ITPFISpec::periodic({{0.5, 0.5}}, {{0.2, 0.8}, {0.3, 0.7}}), ITPFISpec::periodic({}, {{0.6, 0.4}, {0.1, 0.2, 0.7}, {1.0}}));
  EXPECT_EQ(mixed.prefix().size(), 2u);
  EXPECT_EQ(mixed.cycle().size(), 12u);
  for (std::size_t i = 0; i < 40; ++i) {
    double sum = 0;
    for (double a : mixed.factor(i)) sum += a;
    EXPECT_NEAR(sum, 1.0, 1e-12);
  }
  EXPECT_EQ(tensor_spec(s, ITPFISpec::explicit_list({{0.5, 0.5}})).defined_factors(), 2u);
}
