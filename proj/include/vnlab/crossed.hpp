#pragma once

// Group-measure space construction for a finite action.
//
// The representation space has orthonormal basis (g, x), index g*|X| + x,
// where the x-part stands for delta_x / sqrt(mu(x)). In this basis u_h sends
// (g, x) to (hg, h.x) and is a permutation matrix, while M_f is diagonal with
// entry f(x). The trace is the vector state of sum_x sqrt(mu(x)) (e, x).

#include <Eigen/SparseCore>

#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <vector>

#include "vnlab/actions.hpp"
#include "vnlab/staralg.hpp"

namespace vnlab {

/// u_h on the (g, x) basis: (g, x) -> (hg, h.x).
inline Eigen::SparseMatrix<Complex> crossed_unitary(const FiniteAction& action, FinGroup::Element h) {
  const Index atoms = static_cast<Index>(action.space().size());
  const Index d = static_cast<Index>(action.group().order()) * atoms;
  Eigen::SparseMatrix<Complex> u(d, d);
  std::vector<Eigen::Triplet<Complex>> t;
  for (FinGroup::Element g = 0; g < action.group().order(); ++g)
    for (std::size_t x = 0; x < action.space().size(); ++x)
      t.emplace_back(static_cast<Index>(action.group().mul(h, g)) * atoms + action.apply(h, x),
                     static_cast<Index>(g) * atoms + static_cast<Index>(x), 1.0);
  u.setFromTriplets(t.begin(), t.end());
  return u;
}

class CrossedProduct {
 public:
  CrossedProduct(FiniteAction action, StarAlgebra algebra, StarAlgebra diagonal)
      : action_(std::move(action)), algebra_(std::move(algebra)), diagonal_(std::move(diagonal)) {}

  const FiniteAction& action() const noexcept { return action_; }
  const StarAlgebra& algebra() const noexcept { return algebra_; }
  const StarAlgebra& diagonal() const noexcept { return diagonal_; }
  Index group_order() const noexcept { return static_cast<Index>(action_.group().order()); }
  Index atoms() const noexcept { return static_cast<Index>(action_.space().size()); }
  Index dim() const noexcept { return group_order() * atoms(); }
  Index index(FinGroup::Element g, std::size_t x) const { return static_cast<Index>(g) * atoms() + static_cast<Index>(x); }

  Eigen::SparseMatrix<Complex> sparse_unitary(FinGroup::Element h) const { return crossed_unitary(action_, h); }

  Eigen::SparseMatrix<Complex> sparse_multiplication(const ComplexVector& f) const {
    check_function(f);
    Eigen::SparseMatrix<Complex> m(dim(), dim());
    std::vector<Eigen::Triplet<Complex>> t;
    for (Index g = 0; g < group_order(); ++g)
      for (Index x = 0; x < atoms(); ++x) t.emplace_back(g * atoms() + x, g * atoms() + x, f(x));
    m.setFromTriplets(t.begin(), t.end());
    return m;
  }

  ComplexMatrix unitary(FinGroup::Element h) const { return ComplexMatrix(sparse_unitary(h)); }
  ComplexMatrix multiplication(const ComplexVector& f) const { return ComplexMatrix(sparse_multiplication(f)); }

  /// sum_g M_{f_g} u_g for coefficient functions indexed by group element.
  ComplexMatrix monomial_sum(const std::vector<ComplexVector>& coeffs) const {
    if (static_cast<Index>(coeffs.size()) != group_order()) throw InputError("one coefficient function per group element required");
    Eigen::SparseMatrix<Complex> acc(dim(), dim());
    for (FinGroup::Element g = 0; g < action_.group().order(); ++g)
      acc += sparse_multiplication(coeffs[g]) * sparse_unitary(g);
    return ComplexMatrix(acc);
  }

  /// sigma_g(f)(x) = f(g^-1 x).
  ComplexVector translate(FinGroup::Element g, const ComplexVector& f) const {
    check_function(f);
    ComplexVector out(atoms());
    for (std::size_t x = 0; x < action_.space().size(); ++x) out(action_.apply(g, x)) = f(static_cast<Index>(x));
    return out;
  }

  /// int f dmu.
  Complex integral(const ComplexVector& f) const {
    check_function(f);
    Complex s = 0;
    for (Index x = 0; x < atoms(); ++x) s += f(x) * action_.space().weight(static_cast<std::size_t>(x)).value();
    return s;
  }

 private:
  void check_function(const ComplexVector& f) const {
    if (f.size() != atoms()) throw InputError("function on X has the wrong length");
  }

  FiniteAction action_;
  StarAlgebra algebra_;
  StarAlgebra diagonal_;
};

inline CrossedProduct crossed_product(const FiniteAction& action, const Caps& caps = {}, double tol = kDefaultTol) {
  const std::uint64_t n = action.group().order() * action.space().size();
  check_cap("crossed product dimension", n, caps.crossed_dim);
  const Index d = static_cast<Index>(n);
  const Index atoms = static_cast<Index>(action.space().size());
  const Index order = static_cast<Index>(action.group().order());

  std::vector<ComplexMatrix> indicators;
  for (Index x = 0; x < atoms; ++x) {
    ComplexMatrix m = ComplexMatrix::Zero(d, d);
    for (Index g = 0; g < order; ++g) m(g * atoms + x, g * atoms + x) = 1.0;
    indicators.push_back(std::move(m));
  }
  StarAlgebra diagonal = generate_algebra(d, indicators, tol);

  std::vector<ComplexMatrix> gens = indicators;
  for (auto g : generating_set(action.group(), caps)) gens.push_back(ComplexMatrix(crossed_unitary(action, g)));
  StarAlgebra algebra = generate_algebra(d, gens, tol);

  ComplexVector vacuum = ComplexVector::Zero(d);
  for (Index x = 0; x < atoms; ++x)
    vacuum(static_cast<Index>(action.group().identity()) * atoms + x) =
        std::sqrt(action.space().weight(static_cast<std::size_t>(x)).value());
  vacuum /= vacuum.norm();
  algebra = algebra.with_trace_vector(vacuum);
  diagonal = diagonal.with_trace_vector(vacuum);

  CrossedProduct out(action, std::move(algebra), std::move(diagonal));
  // trace on the spanning monomials: tau(1_x u_g) = mu(x) [g = e]
  for (FinGroup::Element g = 0; g < action.group().order(); ++g) {
    const ComplexMatrix u = out.unitary(g);
    for (Index x = 0; x < atoms; ++x) {
      const Complex t = out.algebra().trace_unchecked(indicators[static_cast<std::size_t>(x)] * u);
      const double expected = g == action.group().identity() ? action.space().weight(static_cast<std::size_t>(x)).value() : 0.0;
      if (std::abs(t - expected) > 1e-9)
        throw ConsistencyFailure("crossed product trace disagrees with the integral at (" + action.group().label(g) +
                                 ", " + action.space().atoms()[static_cast<std::size_t>(x)] + ")");
    }
  }
  return out;
}

struct CartanReport {
  bool is_masa = false;
  bool normalizer_dense = false;
  OrbitSignature cartan_invariant;
  Index diagonal_dim = 0;
  Index relative_commutant_dim = 0;
  Index normalizer_span_dim = 0;
};

/// Orbit data recovered from the inclusion D in A alone: the minimal
/// projections e_x of D are linked when e_x A e_y is nonzero, and each class
/// of linked projections contributes the list of traces tau(e_x).
inline OrbitSignature cartan_invariant(const CrossedProduct& cp, std::uint64_t seed = kDefaultSeed) {
  const StarAlgebra& a = cp.algebra();
  const auto dec = central_decomposition(cp.diagonal(), seed);
  const Index d = a.dim();
  const std::size_t k = dec.blocks.size();
  ComplexMatrix frame(d, d);
  std::vector<Index> start(k + 1, 0);
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(dec.blocks[i].projection);
    Index rank = 0;
    for (Index j = 0; j < d; ++j) rank += eig.eigenvalues()(j) > 0.5 ? 1 : 0;
    if (start[i] + rank > d) throw NumericalFailure("minimal projections of the diagonal overlap");
    frame.middleCols(start[i], rank) = eig.eigenvectors().rightCols(rank);
    start[i + 1] = start[i] + rank;
  }
  if (start[k] != d) throw NumericalFailure("minimal projections of the diagonal do not sum to the identity");
  Eigen::MatrixXd link = Eigen::MatrixXd::Zero(static_cast<Index>(k), static_cast<Index>(k));
  for (Index j = 0; j < a.dimension(); ++j) {
    const ComplexMatrix w = frame.adjoint() * a.basis(j) * frame;
    for (std::size_t x = 0; x < k; ++x)
      for (std::size_t y = 0; y < k; ++y)
        link(static_cast<Index>(x), static_cast<Index>(y)) +=
            w.block(start[x], start[y], start[x + 1] - start[x], start[y + 1] - start[y]).squaredNorm();
  }
  std::vector<std::size_t> parent(k);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  const auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = x + 1; y < k; ++y)
      if (link(static_cast<Index>(x), static_cast<Index>(y)) > a.tol()) parent[find(x)] = find(y);
  std::map<std::size_t, std::vector<Weight>> classes;
  for (std::size_t x = 0; x < k; ++x)
    classes[find(x)].push_back(Weight::approximate(a.trace_unchecked(dec.blocks[x].projection).real()));
  std::vector<std::vector<Weight>> desc;
  for (auto& [root, w] : classes) desc.push_back(std::move(w));
  return OrbitSignature(std::move(desc));
}

inline CartanReport cartan_report(const CrossedProduct& cp, std::uint64_t seed = kDefaultSeed) {
  CartanReport r;
  const StarAlgebra& a = cp.algebra();
  r.diagonal_dim = cp.diagonal().dimension();
  const auto rel = relative_commutant(a, cp.diagonal().commutation_set());
  r.relative_commutant_dim = rel.dimension();
  r.is_masa = rel.dimension() == r.diagonal_dim;

  // unimodular f: characters x -> exp(2 pi i k x / |X|), which span all functions
  const Index atoms = cp.atoms();
  const Index d = a.dim();
  const Index count = atoms * cp.group_order();
  std::vector<Eigen::Triplet<Complex>> entries;
  bool inside = true;
  Index col = 0;
  for (FinGroup::Element g = 0; g < cp.action().group().order(); ++g) {
    const auto u = cp.sparse_unitary(g);
    for (Index c = 0; c < atoms; ++c, ++col) {
      ComplexVector f(atoms);
      for (Index x = 0; x < atoms; ++x) f(x) = std::polar(1.0, 2.0 * M_PI * static_cast<double>(c * x) / static_cast<double>(atoms));
      const Eigen::SparseMatrix<Complex> m = cp.sparse_multiplication(f) * u;
      inside = inside && a.contains(ComplexMatrix(m));
      for (Index k = 0; k < m.outerSize(); ++k)
        for (Eigen::SparseMatrix<Complex>::InnerIterator it(m, k); it; ++it)
          entries.emplace_back(it.col() * d + it.row(), col, it.value());
    }
  }
  Eigen::SparseMatrix<Complex> stacked(d * d, count);
  stacked.setFromTriplets(entries.begin(), entries.end());
  const ComplexMatrix gram = ComplexMatrix(stacked.adjoint() * stacked);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(gram, Eigen::EigenvaluesOnly);
  const double top = eig.eigenvalues().maxCoeff();
  Index rank = 0;
  for (Index i = 0; i < count; ++i) rank += eig.eigenvalues()(i) > a.tol() * top ? 1 : 0;
  r.normalizer_span_dim = rank;
  r.normalizer_dense = inside && rank == a.dimension();
  r.cartan_invariant = cartan_invariant(cp, seed);
  return r;
}

inline CartanReport cartan_report(const FiniteAction& action, const Caps& caps = {}) {
  return cartan_report(crossed_product(action, caps));
}

struct FeldmanMooreResult {
  bool oe = false;
  bool cartan_equal = false;
  bool consistent = false;
};

inline FeldmanMooreResult feldman_moore_check(const FiniteAction& s, const FiniteAction& t, const Caps& caps = {}) {
  FeldmanMooreResult r;
  r.oe = orbit_equivalent(s, t);
  r.cartan_equal = cartan_invariant(crossed_product(s, caps)) == cartan_invariant(crossed_product(t, caps));
  r.consistent = r.oe == r.cartan_equal;
  return r;
}

struct MonomialIdentityCheck {
  std::size_t pairs = 0;
  double product_error = 0;    // max |(f u_g)(f' u_h) - f sigma_g(f') u_gh|
  double involution_error = 0; // max |(f u_g)* - sigma_{g^-1}(conj f) u_{g^-1}|
};

/// Checks the product and involution rules on f u_g for every ordered pair
/// (g, h) with random complex coefficient functions.
inline MonomialIdentityCheck check_monomial_identities(const CrossedProduct& cp, std::uint64_t seed = kDefaultSeed) {
  const FinGroup& grp = cp.action().group();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto random_f = [&] {
    ComplexVector f(cp.atoms());
    for (Index x = 0; x < f.size(); ++x) f(x) = Complex(gauss(rng), gauss(rng));
    return f;
  };
  std::vector<Eigen::SparseMatrix<Complex>> u;
  for (FinGroup::Element g = 0; g < grp.order(); ++g) u.push_back(cp.sparse_unitary(g));
  MonomialIdentityCheck out;
  for (FinGroup::Element g = 0; g < grp.order(); ++g) {
    const ComplexVector f = random_f();
    const Eigen::SparseMatrix<Complex> lhs_g = cp.sparse_multiplication(f) * u[g];
    const auto gi = grp.inv(g);
    const Eigen::SparseMatrix<Complex> adj = Eigen::SparseMatrix<Complex>(lhs_g.adjoint());
    const Eigen::SparseMatrix<Complex> rhs_adj = cp.sparse_multiplication(cp.translate(gi, f.conjugate())) * u[gi];
    out.involution_error = std::max(out.involution_error, (adj - rhs_adj).norm());
    for (FinGroup::Element h = 0; h < grp.order(); ++h) {
      const ComplexVector f2 = random_f();
      const Eigen::SparseMatrix<Complex> lhs = lhs_g * (cp.sparse_multiplication(f2) * u[h]);
      const ComplexVector prod = f.cwiseProduct(cp.translate(g, f2));
      const Eigen::SparseMatrix<Complex> rhs = cp.sparse_multiplication(prod) * u[grp.mul(g, h)];
      out.product_error = std::max(out.product_error, (lhs - rhs).norm());
      ++out.pairs;
    }
  }
  return out;
}

}  // namespace vnlab
