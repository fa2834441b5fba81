#include <gtest/gtest.h>

#include <random>

#include "vnlab/staralg.hpp"

using namespace vnlab;

namespace {

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

// Oracle: closure by all pairwise products and adjoints of a spanning set,
// with rank measured by SVD of the stacked vectorisations.
Index naive_closure_dimension(Index d, const std::vector<ComplexMatrix>& gens) {
  std::vector<ComplexMatrix> span{ComplexMatrix::Identity(d, d)};
  for (const auto& g : gens) {
    span.push_back(g);
    span.push_back(g.adjoint());
  }
  const auto rank_of = [&](const std::vector<ComplexMatrix>& v) {
    Eigen::MatrixXcd m(d * d, static_cast<Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) m.col(static_cast<Index>(i)) = Eigen::Map<const ComplexVector>(v[i].data(), d * d);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
    const auto& s = svd.singularValues();
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i) r += s(i) > 1e-9 * s(0) ? 1 : 0;
    return r;
  };
  Index rank = rank_of(span);
  for (;;) {
    std::vector<ComplexMatrix> next = span;
    for (const auto& a : span)
      for (const auto& b : span) next.push_back(a * b);
    // reduce to a basis to keep sizes bounded
    Eigen::MatrixXcd m(d * d, static_cast<Index>(next.size()));
    for (std::size_t i = 0; i < next.size(); ++i) m.col(static_cast<Index>(i)) = Eigen::Map<const ComplexVector>(next[i].data(), d * d);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    Index r = 0;
    for (Index i = 0; i < s.size(); ++i) r += s(i) > 1e-9 * s(0) ? 1 : 0;
    if (r == rank) return rank;
    rank = r;
    span.clear();
    for (Index i = 0; i < r; ++i) span.emplace_back(Eigen::Map<const ComplexMatrix>(svd.matrixU().col(i).data(), d, d));
  }
}

ComplexMatrix random_unitary(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0, 1);
  ComplexMatrix m(d, d);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  return qr.householderQ();
}

// Random element of U (sum_i M_{n_i} (x) I_{m_i}) U*.
struct Shape {
  std::vector<std::pair<int, int>> summands;  // (n, multiplicity)
  Index dim() const {
    Index d = 0;
    for (auto [n, m] : summands) d += n * m;
    return d;
  }
  Index algebra_dim() const {
    Index k = 0;
    for (auto [n, m] : summands) k += n * n;
    return k;
  }
};

ComplexMatrix random_structured(const Shape& s, const ComplexMatrix& u, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0, 1);
  const Index d = s.dim();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  Index off = 0;
  for (auto [n, m] : s.summands) {
    ComplexMatrix x(n, n);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = Complex(g(rng), g(rng));
    out.block(off, off, n * m, n * m) = detail::kron(x, ComplexMatrix(ComplexMatrix::Identity(m, m)));
    off += n * m;
  }
  return u * out * u.adjoint();
}

Shape random_shape(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim_pick(2, 6);
  const int d = dim_pick(rng);
  Shape s;
  int left = d;
  while (left > 0) {
    std::uniform_int_distribution<int> np(1, std::min(left, 3));
    const int n = np(rng);
    std::uniform_int_distribution<int> mp(1, std::max(1, left / n));
    const int m = mp(rng);
    s.summands.push_back({n, m});
    left -= n * m;
  }
  return s;
}

}  // namespace

TEST(GenerateAlgebra, EmptyGeneratorsGiveScalars) {
  const auto a = generate_algebra(2, {});
  EXPECT_EQ(a.dimension(), 1);
  EXPECT_TRUE(a.contains(ComplexMatrix::Identity(2, 2)));
}

TEST(GenerateAlgebra, DiagonalGenerator) {
  const auto a = generate_algebra(2, {mat2(1, 0, 0, 2)});
  EXPECT_EQ(a.dimension(), 2);
  EXPECT_EQ(naive_closure_dimension(2, {mat2(1, 0, 0, 2)}), 2);
}

TEST(GenerateAlgebra, PauliPairGivesFullAlgebra) {
  const std::vector<ComplexMatrix> gens{mat2(0, 1, 1, 0), mat2(1, 0, 0, -1)};
  EXPECT_EQ(generate_algebra(2, gens).dimension(), 4);
  EXPECT_EQ(naive_closure_dimension(2, gens), 4);
}

TEST(GenerateAlgebra, RejectsMismatchedShapes) {
  EXPECT_THROW(generate_algebra(2, {ComplexMatrix::Identity(3, 3)}), InputError);
  EXPECT_THROW(generate_algebra(0, {}), InputError);
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 1) = Complex(std::nan(""), 0);
  EXPECT_THROW(generate_algebra(2, {bad}), InputError);
}

TEST(GenerateAlgebra, MatchesPairwiseClosureOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Shape s = random_shape(rng);
    const ComplexMatrix u = random_unitary(s.dim(), rng);
    std::vector<ComplexMatrix> gens{random_structured(s, u, rng), random_structured(s, u, rng)};
    const auto a = generate_algebra(s.dim(), gens);
    EXPECT_EQ(a.dimension(), naive_closure_dimension(s.dim(), gens));
    EXPECT_EQ(a.dimension(), s.algebra_dim());
  }
}

TEST(GenerateAlgebra, ClosedUnderProductsAndAdjoints) {
  std::mt19937_64 rng(12);
  const Shape s{{{2, 1}, {1, 2}}};
  const ComplexMatrix u = random_unitary(s.dim(), rng);
  const auto a = generate_algebra(s.dim(), {random_structured(s, u, rng)});
  for (Index i = 0; i < a.dimension(); ++i) {
    EXPECT_LT(a.residual(a.basis(i).adjoint()), 1e-9);
    for (Index j = 0; j < a.dimension(); ++j) EXPECT_LT(a.residual(a.basis(i) * a.basis(j)), 1e-9);
  }
  // Hilbert-Schmidt orthonormal basis
  const Eigen::MatrixXcd gram = a.basis_columns().adjoint() * a.basis_columns();
  EXPECT_LT((gram - Eigen::MatrixXcd::Identity(a.dimension(), a.dimension())).norm(), 1e-10);
}

TEST(Commutant, Examples) {
  EXPECT_EQ(commutant(scalars(3)).dimension(), 9);
  EXPECT_EQ(commutant(full_matrix_algebra(3)).dimension(), 1);
  const auto diag = diagonal_algebra(3);
  const auto c = commutant(diag);
  EXPECT_EQ(c.dimension(), 3);
  // direct solve: m commutes with diag(1,2,3) iff off-diagonal entries vanish
  for (Index i = 0; i < c.dimension(); ++i) {
    const ComplexMatrix m = c.basis(i);
    for (Index r = 0; r < 3; ++r)
      for (Index k = 0; k < 3; ++k)
        if (r != k) EXPECT_LT(std::abs(m(r, k)), 1e-12);
  }
  EXPECT_TRUE(same_span(c, diag, 1e-9));
}

TEST(Commutant, RespectsCap) {
  Caps caps;
  caps.commutant_dim = 2;
  EXPECT_THROW(commutant(scalars(3), caps), CapExceeded);
}

TEST(Commutant, DoubleCommutantProperty) {
  std::mt19937_64 rng(kDefaultSeed);
  for (int trial = 0; trial < 50; ++trial) {
    const Shape s = random_shape(rng);
    const ComplexMatrix u = random_unitary(s.dim(), rng);
    const auto a = generate_algebra(s.dim(), {random_structured(s, u, rng), random_structured(s, u, rng)});
    const auto cc = commutant(commutant(a));
    EXPECT_TRUE(same_span(a, cc, 1e-8)) << "trial " << trial;
  }
}

TEST(Analyze, FullMatrixAlgebra) {
  const auto r = analyze(full_matrix_algebra(2));
  EXPECT_EQ(r.dimension, 4);
  EXPECT_EQ(r.center_dim, 1);
  EXPECT_TRUE(r.is_factor);
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_EQ(r.blocks[0].size, 2);
  EXPECT_NEAR(r.blocks[0].weight, 1.0, 1e-12);
}

TEST(Analyze, DiagonalUniform) {
  const auto r = analyze(diagonal_algebra(3));
  EXPECT_EQ(r.dimension, 3);
  EXPECT_EQ(r.center_dim, 3);
  EXPECT_FALSE(r.is_factor);
  ASSERT_EQ(r.blocks.size(), 3u);
  for (const auto& b : r.blocks) {
    EXPECT_EQ(b.size, 1);
    EXPECT_NEAR(b.weight, 1.0 / 3, 1e-12);
  }
}

TEST(Analyze, TwoElementGroupAlgebraWithDeltaTrace) {
  const ComplexMatrix swap = mat2(0, 1, 1, 0);
  ComplexVector xi_e(2);
  xi_e << 1, 0;
  const auto a = generate_algebra(2, {swap}).with_trace_vector(xi_e);
  const auto dec = central_decomposition(a);
  ASSERT_EQ(dec.blocks.size(), 2u);
  // oracle: central idempotents (I +- swap)/2
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  const ComplexMatrix plus = (id + swap) / 2.0, minus = (id - swap) / 2.0;
  for (const auto& b : dec.blocks) {
    EXPECT_EQ(b.size, 1);
    EXPECT_NEAR(b.weight, 0.5, 1e-12);
    EXPECT_LT(std::min((b.projection - plus).norm(), (b.projection - minus).norm()), 1e-10);
  }
}

TEST(Analyze, FaithfulnessFailureOnDegenerateVectorState) {
  ComplexVector v(2);
  v << 1, 0;
  EXPECT_THROW(analyze(diagonal_algebra(2).with_trace_vector(v)), FaithfulnessFailure);
}

TEST(Analyze, BlockInvariantsOnRandomAlgebras) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const Shape s = random_shape(rng);
    const ComplexMatrix u = random_unitary(s.dim(), rng);
    const auto a = generate_algebra(s.dim(), {random_structured(s, u, rng), random_structured(s, u, rng)});
    const auto r = analyze(a);
    Index sq = 0;
    double total = 0;
    for (const auto& b : r.blocks) {
      sq += b.size * b.size;
      total += b.weight;
    }
    EXPECT_EQ(sq, r.dimension);
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_EQ(r.is_factor, r.center_dim == 1);
    EXPECT_EQ(r.is_factor, r.blocks.size() == 1);
    EXPECT_EQ(r.blocks.size(), s.summands.size());
  }
}

TEST(Trace, Examples) {
  const auto m2 = full_matrix_algebra(2);
  EXPECT_NEAR(std::abs(m2.trace(ComplexMatrix::Identity(2, 2)) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(m2.trace(mat2(1, 0, 0, 0)).real(), 0.5, 1e-12);
  ComplexVector xi_e(2);
  xi_e << 1, 0;
  const auto group = generate_algebra(2, {mat2(0, 1, 1, 0)}).with_trace_vector(xi_e);
  EXPECT_NEAR(std::abs(group.trace(mat2(0, 1, 1, 0))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(group.trace(ComplexMatrix::Identity(2, 2)) - 1.0), 0.0, 1e-12);
}

TEST(Trace, MembershipError) {
  const auto d = diagonal_algebra(2);
  EXPECT_THROW(d.trace(mat2(0, 1, 0, 0)), MembershipError);
}

TEST(Trace, TracialAndFaithful) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const Shape s = random_shape(rng);
    const ComplexMatrix u = random_unitary(s.dim(), rng);
    const auto a = generate_algebra(s.dim(), {random_structured(s, u, rng), random_structured(s, u, rng)});
    for (int k = 0; k < 5; ++k) {
      const ComplexMatrix x = a.random_element(rng), y = a.random_element(rng);
      EXPECT_LT(std::abs(a.trace(x * y) - a.trace(y * x)), 1e-9 * std::max(1.0, x.norm() * y.norm()));
      const double xx = a.trace(x.adjoint() * x).real();
      EXPECT_GE(xx, -1e-9);
      EXPECT_NEAR(a.tau_norm(x), std::sqrt(xx), 1e-9);
    }
  }
}

TEST(Trace, BlockWeightsDefineState) {
  // C + C with weights (1/3, 2/3): tau(p) for each minimal projection
  const auto d = diagonal_algebra(2);
  const auto w = with_block_weights(d, {1.0 / 3, 2.0 / 3});
  const auto r = analyze(w);
  ASSERT_EQ(r.blocks.size(), 2u);
  EXPECT_NEAR(r.blocks[0].weight, 1.0 / 3, 1e-12);
  EXPECT_NEAR(r.blocks[1].weight, 2.0 / 3, 1e-12);
  EXPECT_THROW(with_block_weights(d, {0.5}), InputError);
  EXPECT_THROW(with_block_weights(d, {0.5, 0.6}), InputError);
}

TEST(TraceSpectrum, Examples) {
  const auto s = trace_spectrum(full_matrix_algebra(2));
  ASSERT_EQ(s.size(), 3u);
  EXPECT_NEAR(s[1], 0.5, 1e-12);
  const auto cc = trace_spectrum(with_block_weights(diagonal_algebra(2), {1.0 / 3, 2.0 / 3}));
  const std::vector<double> expected{0, 1.0 / 3, 2.0 / 3, 1};
  ASSERT_EQ(cc.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(cc[i], expected[i], 1e-12);
  const auto m1 = trace_spectrum(scalars(1));
  ASSERT_EQ(m1.size(), 2u);
}

TEST(TraceSpectrum, SubsetSumOracleAndSymmetry) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const Shape s = random_shape(rng);
    const ComplexMatrix u = random_unitary(s.dim(), rng);
    const auto a = generate_algebra(s.dim(), {random_structured(s, u, rng)});
    const auto r = analyze(a);
    const auto spec = trace_spectrum(r);
    EXPECT_NEAR(spec.front(), 0.0, 1e-12);
    EXPECT_NEAR(spec.back(), 1.0, 1e-9);
    for (double t : spec) {
      EXPECT_GE(t, -1e-12);
      EXPECT_LE(t, 1 + 1e-9);
      const bool has_complement =
          std::any_of(spec.begin(), spec.end(), [&](double v) { return std::abs(v - (1 - t)) < 1e-9; });
      EXPECT_TRUE(has_complement);
    }
    // oracle: enumerate rank vectors directly
    std::vector<double> sums{0};
    for (const auto& b : r.blocks) {
      std::vector<double> next;
      for (double v : sums)
        for (int k = 0; k <= b.size; ++k) next.push_back(v + b.weight * k / b.size);
      sums = next;
    }
    for (double v : sums)
      EXPECT_TRUE(std::any_of(spec.begin(), spec.end(), [&](double t) { return std::abs(v - t) < 1e-9; }));
  }
}

TEST(Tensor, Examples) {
  const auto r = analyze(tensor(full_matrix_algebra(2), full_matrix_algebra(3)));
  ASSERT_EQ(r.blocks.size(), 1u);
  EXPECT_EQ(r.blocks[0].size, 6);
  EXPECT_NEAR(r.blocks[0].weight, 1.0, 1e-12);

  const auto cc = with_block_weights(diagonal_algebra(2), {0.25, 0.75});
  const auto rt = analyze(tensor(cc, full_matrix_algebra(2)));
  ASSERT_EQ(rt.blocks.size(), 2u);
  std::vector<double> w{rt.blocks[0].weight, rt.blocks[1].weight};
  std::sort(w.begin(), w.end());
  EXPECT_EQ(rt.blocks[0].size, 2);
  EXPECT_EQ(rt.blocks[1].size, 2);
  EXPECT_NEAR(w[0], 0.25, 1e-12);
  EXPECT_NEAR(w[1], 0.75, 1e-12);

  const auto base = analyze(cc);
  const auto one = analyze(tensor(cc, scalars(1)));
  ASSERT_EQ(base.blocks.size(), one.blocks.size());
  for (std::size_t i = 0; i < base.blocks.size(); ++i) {
    EXPECT_EQ(base.blocks[i].size, one.blocks[i].size);
    EXPECT_NEAR(base.blocks[i].weight, one.blocks[i].weight, 1e-12);
  }
}
