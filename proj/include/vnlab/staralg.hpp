#pragma once

// Finite-dimensional *-algebras of matrices: generation by span saturation,
// commutants, centers, central block decomposition and traces.
//
// Every element lives in M_d(C). A StarAlgebra keeps a Hilbert-Schmidt
// orthonormal basis stored as the columns of a d^2 x k matrix (column-major
// vectorisation), so membership and coordinates are a single projection.

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vnlab/caps.hpp"
#include "vnlab/error.hpp"

namespace vnlab {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr std::uint64_t kDefaultSeed = 20071113;

namespace detail {

inline Eigen::Map<const ComplexVector> vec(const ComplexMatrix& m) {
  return {m.data(), m.size()};
}

inline Eigen::Map<const ComplexMatrix> unvec(const Complex* data, Index d) { return {data, d, d}; }

inline bool all_finite(const ComplexMatrix& m) {
  for (Index i = 0; i < m.size(); ++i) {
    if (!std::isfinite(m.data()[i].real()) || !std::isfinite(m.data()[i].imag())) return false;
  }
  return true;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

/// A generator kept in dense form plus a sparse copy when it is mostly zero
/// (permutation and diagonal matrices are the common case).
class Operand {
 public:
  explicit Operand(ComplexMatrix m) : dense_(std::move(m)) {
    Index nnz = 0;
    for (Index i = 0; i < dense_.size(); ++i) nnz += dense_.data()[i] != Complex(0.0) ? 1 : 0;
    if (nnz * 4 <= dense_.size()) {
      sparse_ = dense_.sparseView();
      use_sparse_ = true;
    }
  }

  const ComplexMatrix& dense() const noexcept { return dense_; }

  ComplexMatrix left_apply(const ComplexMatrix& x) const {
    if (use_sparse_) return sparse_ * x;
    return dense_ * x;
  }
  ComplexMatrix right_apply(const ComplexMatrix& x) const {
    if (use_sparse_) return x * sparse_;
    return x * dense_;
  }
  ComplexMatrix commutator_with(const ComplexMatrix& x) const { return right_apply(x) - left_apply(x); }

 private:
  ComplexMatrix dense_;
  Eigen::SparseMatrix<Complex> sparse_;
  bool use_sparse_ = false;
};

/// Orthonormal basis of a growing subspace of C^n.
class OrthonormalSpan {
 public:
  OrthonormalSpan(Index ambient, double tol) : q_(ambient, 0), tol_(tol) {}

  Index size() const noexcept { return size_; }
  auto basis() const { return q_.leftCols(size_); }

  /// Adds the components of the candidate columns orthogonal to the span.
  /// A candidate whose residual is below tol times its own norm is dependent.
  /// Returns the indices of the candidates that enlarged the span.
  std::vector<Index> absorb(const Eigen::MatrixXcd& candidates) {
    std::vector<Index> accepted;
    constexpr Index kChunk = 128;
    for (Index start = 0; start < candidates.cols(); start += kChunk) {
      const Index width = std::min(kChunk, candidates.cols() - start);
      Eigen::MatrixXcd r = candidates.middleCols(start, width);
      const Eigen::VectorXd norms = r.colwise().norm();
      if (size_ > 0) r.noalias() -= basis() * (basis().adjoint() * r);
      for (Index j = 0; j < width; ++j) {
        if (norms(j) == 0.0) continue;
        if (r.col(j).norm() <= tol_ * norms(j)) continue;
        ComplexVector v = r.col(j);
        for (int pass = 0; pass < 2 && size_ > 0; ++pass) v.noalias() -= basis() * (basis().adjoint() * v);
        const double vn = v.norm();
        if (vn <= tol_ * norms(j)) continue;
        append(v / vn);
        accepted.push_back(start + j);
      }
    }
    return accepted;
  }

  Eigen::MatrixXcd take() && {
    q_.conservativeResize(Eigen::NoChange, size_);
    return std::move(q_);
  }

 private:
  void append(const ComplexVector& v) {
    if (size_ == q_.cols()) q_.conservativeResize(Eigen::NoChange, std::max<Index>(8, 2 * q_.cols()));
    q_.col(size_++) = v;
  }

  Eigen::MatrixXcd q_;
  Index size_ = 0;
  double tol_;
};

/// Orthonormal basis of the numerical null space of `a`. Singular values
/// at most tol * max(sigma_max, scale) count as zero.
inline Eigen::MatrixXcd null_space(const Eigen::MatrixXcd& full, double tol, double scale) {
  const Index n = full.cols();
  if (n == 0) return Eigen::MatrixXcd(0, 0);
  std::vector<Index> rows;
  for (Index i = 0; i < full.rows(); ++i)
    if (full.row(i).cwiseAbs().maxCoeff() != 0.0) rows.push_back(i);
  Eigen::MatrixXcd a(static_cast<Index>(rows.size()), n);
  for (std::size_t i = 0; i < rows.size(); ++i) a.row(static_cast<Index>(i)) = full.row(rows[i]);
  if (rows.empty()) return Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd r;
  if (a.rows() > n) {
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(a);
    r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  } else {
    r = a;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(r, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double top = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = tol * std::max(top, scale);
  Index rank = 0;
  for (Index i = 0; i < sv.size(); ++i) rank += sv(i) > threshold ? 1 : 0;
  return svd.matrixV().rightCols(n - rank);
}

}  // namespace detail

/// Unital self-adjoint subalgebra of M_d(C) together with a distinguished state.
///
/// The state is one of: the normalised matrix trace tr(x)/d (default), a
/// vector state <x v, v>, or a density tr(rho x). Values are immutable; the
/// basis is shared between copies.
class StarAlgebra {
 public:
  enum class TraceKind { NormalizedMatrix, Vector, Density };

  /// Builds from an orthonormal basis given as columns of a d^2 x k matrix.
  StarAlgebra(Index d, Eigen::MatrixXcd orthonormal_columns, std::vector<ComplexMatrix> generators, double tol)
      : data_(std::make_shared<const Data>(d, std::move(orthonormal_columns), std::move(generators), tol)) {}

  Index dim() const noexcept { return data_->d; }
  Index dimension() const noexcept { return data_->q.cols(); }
  double tol() const noexcept { return data_->tol; }

  Eigen::Map<const ComplexMatrix> basis(Index i) const { return detail::unvec(data_->q.col(i).data(), data_->d); }
  const Eigen::MatrixXcd& basis_columns() const noexcept { return data_->q; }
  const std::vector<ComplexMatrix>& generators() const noexcept { return data_->generators; }

  /// Generating set used for commutation tests: the stored generators and
  /// their adjoints, or the basis when no generators were recorded.
  std::vector<ComplexMatrix> commutation_set() const {
    std::vector<ComplexMatrix> out;
    if (data_->generators.empty()) {
      for (Index i = 0; i < dimension(); ++i) out.emplace_back(basis(i));
      return out;
    }
    // g* is a polynomial in g when g is unitary, so commuting with g suffices
    for (const auto& g : data_->generators) {
      out.push_back(g);
      const ComplexMatrix adj = g.adjoint();
      const double scale = std::max(1.0, g.norm());
      if ((adj - g).norm() <= tol() * scale) continue;
      if ((adj * g - ComplexMatrix::Identity(dim(), dim())).norm() <= tol() * scale) continue;
      out.push_back(adj);
    }
    return out;
  }

  ComplexVector coordinates(const ComplexMatrix& x) const {
    if (data_->sparse) return data_->qs.adjoint() * detail::vec(x);
    return data_->q.adjoint() * detail::vec(x);
  }

  /// Basis combinations: column j of the result is sum_i coords(i, j) b_i, vectorised.
  Eigen::MatrixXcd combine(const Eigen::MatrixXcd& coords) const {
    if (data_->sparse) return data_->qs * coords;
    return data_->q * coords;
  }

  ComplexMatrix element(const ComplexVector& coords) const {
    if (coords.size() != dimension()) throw InputError("coordinate vector has the wrong length");
    const Eigen::MatrixXcd v = combine(coords);
    return detail::unvec(v.data(), dim());
  }

  /// Hilbert-Schmidt distance from x to the algebra, relative to max(1, |x|).
  double residual(const ComplexMatrix& x) const {
    check_shape(x);
    const auto v = detail::vec(x);
    const ComplexVector c = coordinates(x);
    // |v - Q c|^2 = |v|^2 - |c|^2 for orthonormal Q
    const double vn = v.squaredNorm();
    const double rem = vn - c.squaredNorm();
    double r2 = rem;
    if (rem <= 1e-6 * vn) r2 = (v - combine(c)).squaredNorm();
    return std::sqrt(std::max(0.0, r2)) / std::max(1.0, std::sqrt(vn));
  }

  bool contains(const ComplexMatrix& x) const { return residual(x) <= tol() * 10; }

  TraceKind trace_kind() const noexcept { return trace_kind_; }
  const std::optional<ComplexVector>& trace_vector() const noexcept { return trace_vector_; }
  const std::optional<std::vector<double>>& weights() const noexcept { return weights_; }

  /// Density matrix of the state (v v* for vector states, I/d for the default).
  ComplexMatrix density() const {
    switch (trace_kind_) {
      case TraceKind::Vector: return *trace_vector_ * trace_vector_->adjoint();
      case TraceKind::Density: return density_;
      case TraceKind::NormalizedMatrix: break;
    }
    return ComplexMatrix::Identity(dim(), dim()) / static_cast<double>(dim());
  }

  /// State value without the membership check.
  Complex trace_unchecked(const ComplexMatrix& x) const {
    switch (trace_kind_) {
      case TraceKind::Vector: return trace_vector_->dot(x * *trace_vector_);
      case TraceKind::Density: return density_.transpose().cwiseProduct(x).sum();
      case TraceKind::NormalizedMatrix: break;
    }
    return x.trace() / static_cast<double>(dim());
  }

  /// tau(x); x must lie in the algebra.
  Complex trace(const ComplexMatrix& x) const {
    if (!contains(x)) throw MembershipError("element is not in the algebra (residual " + std::to_string(residual(x)) + ")");
    return trace_unchecked(x);
  }

  /// |x|_tau = tau(x* x)^{1/2}.
  double tau_norm(const ComplexMatrix& x) const {
    return std::sqrt(std::max(0.0, trace(x.adjoint() * x).real()));
  }

  StarAlgebra with_trace_vector(const ComplexVector& v) const {
    if (v.size() != dim()) throw InputError("trace vector has the wrong dimension");
    if (std::abs(v.norm() - 1.0) > 1e-9) throw InputError("trace vector must be a unit vector");
    StarAlgebra out = *this;
    out.trace_kind_ = TraceKind::Vector;
    out.trace_vector_ = v;
    out.weights_.reset();
    return out;
  }

  StarAlgebra with_density(const ComplexMatrix& rho, std::optional<std::vector<double>> weights = std::nullopt) const {
    check_shape(rho);
    if (std::abs(rho.trace() - Complex(1.0)) > 1e-9) throw InputError("density must have unit trace");
    StarAlgebra out = *this;
    out.trace_kind_ = TraceKind::Density;
    out.density_ = rho;
    out.trace_vector_.reset();
    out.weights_ = std::move(weights);
    return out;
  }

  /// Same algebra, default normalised matrix trace.
  StarAlgebra with_normalized_trace() const {
    StarAlgebra out = *this;
    out.trace_kind_ = TraceKind::NormalizedMatrix;
    out.trace_vector_.reset();
    out.weights_.reset();
    out.density_.resize(0, 0);
    return out;
  }

  /// Random element sum c_i b_i with complex Gaussian coordinates.
  template <class Rng>
  ComplexMatrix random_element(Rng& rng) const {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexVector c(dimension());
    for (Index i = 0; i < c.size(); ++i) c(i) = Complex(gauss(rng), gauss(rng));
    return element(c);
  }

  void check_shape(const ComplexMatrix& x) const {
    if (x.rows() != dim() || x.cols() != dim())
      throw InputError("matrix is " + std::to_string(x.rows()) + "x" + std::to_string(x.cols()) +
                       ", algebra lives in dimension " + std::to_string(dim()));
  }

 private:
  struct Data {
    Data(Index dim, Eigen::MatrixXcd basis, std::vector<ComplexMatrix> gens, double t)
        : d(dim), q(std::move(basis)), generators(std::move(gens)), tol(t) {
      Index nnz = 0;
      for (Index i = 0; i < q.size(); ++i) nnz += q.data()[i] != Complex(0.0) ? 1 : 0;
      if (nnz * 4 <= q.size() && q.size() > 0) {
        qs = q.sparseView();
        sparse = true;
      }
    }
    Index d;
    Eigen::MatrixXcd q;
    std::vector<ComplexMatrix> generators;
    double tol;
    Eigen::SparseMatrix<Complex> qs;  // copy of q when mostly zero
    bool sparse = false;
  };

  std::shared_ptr<const Data> data_;
  TraceKind trace_kind_ = TraceKind::NormalizedMatrix;
  std::optional<ComplexVector> trace_vector_;
  ComplexMatrix density_;
  std::optional<std::vector<double>> weights_;
};

namespace detail {

/// Drops zero columns and columns that are scalar multiples of an earlier
/// column or of a word already seen. Words are scaled to unit norm with the
/// first significant entry made real positive, then hashed after rounding.
class WordFilter {
 public:
  explicit WordFilter(double tol) : tol_(tol) {}

  /// Returns the canonical form of `v`, or nothing when it is zero or a repeat.
  std::optional<ComplexVector> admit(const ComplexVector& v) {
    const double n = v.norm();
    if (n <= tol_) return std::nullopt;
    Index lead = 0;
    const double cut = 1e-6 * v.cwiseAbs().maxCoeff();
    while (std::abs(v(lead)) <= cut) ++lead;
    const Complex phase = v(lead) / std::abs(v(lead));
    ComplexVector c = v / (n * phase);
    std::size_t h = static_cast<std::size_t>(lead);
    for (Index i = 0; i < c.size(); ++i) {
      if (std::abs(c(i)) <= cut / n) continue;
      const auto re = static_cast<long long>(std::llround(c(i).real() * 1e7));
      const auto im = static_cast<long long>(std::llround(c(i).imag() * 1e7));
      h ^= std::hash<long long>{}(re * 1000003LL + im + i * 7919LL) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    auto& bucket = seen_[h];
    for (const auto& w : bucket)
      if ((w - c).norm() <= 1e-12) return std::nullopt;
    bucket.push_back(c);
    return c;
  }

 private:
  double tol_;
  std::unordered_map<std::size_t, std::vector<ComplexVector>> seen_;
};

}  // namespace detail

/// Smallest unital *-subalgebra of M_d containing `gens`.
///
/// Saturation runs breadth first over words: each round multiplies the
/// words accepted in the previous round on the left by every generator and
/// generator adjoint, drops repeats, and absorbs the rest into a
/// Hilbert-Schmidt orthonormal basis. The span of words is closed under
/// products and adjoints, and the dimension strictly increases until the
/// round that adds nothing.
inline StarAlgebra generate_algebra(Index d, const std::vector<ComplexMatrix>& gens, double tol = kDefaultTol) {
  if (d < 1) throw InputError("ambient dimension must be positive");
  std::vector<detail::Operand> ops;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    const auto& g = gens[i];
    if (g.rows() != d || g.cols() != d)
      throw InputError("generator " + std::to_string(i) + " is " + std::to_string(g.rows()) + "x" +
                       std::to_string(g.cols()) + ", expected " + std::to_string(d) + "x" + std::to_string(d));
    if (!detail::all_finite(g)) throw InputError("generator " + std::to_string(i) + " has non-finite entries");
    ops.emplace_back(g);
    const ComplexMatrix adj = g.adjoint();
    if ((adj - g).norm() > tol * std::max(1.0, g.norm())) ops.emplace_back(adj);
  }

  detail::OrthonormalSpan span(d * d, tol);
  detail::WordFilter filter(tol);
  const ComplexMatrix identity = ComplexMatrix::Identity(d, d);
  std::vector<ComplexMatrix> frontier;
  if (auto w = filter.admit(detail::vec(identity))) {
    span.absorb(*w);
    frontier.push_back(identity / std::sqrt(static_cast<double>(d)));
  }
  while (!frontier.empty() && !ops.empty()) {
    std::vector<ComplexVector> words;
    for (const auto& word : frontier)
      for (const auto& op : ops) {
        const ComplexMatrix prod = op.left_apply(word);
        if (auto w = filter.admit(detail::vec(prod))) words.push_back(std::move(*w));
      }
    Eigen::MatrixXcd candidates(d * d, static_cast<Index>(words.size()));
    for (std::size_t j = 0; j < words.size(); ++j) candidates.col(static_cast<Index>(j)) = words[j];
    const auto accepted = span.absorb(candidates);
    frontier.clear();
    for (Index j : accepted) frontier.emplace_back(detail::unvec(words[static_cast<std::size_t>(j)].data(), d));
  }
  return StarAlgebra(d, std::move(span).take(), gens, tol);
}

/// Elements of `a` commuting with every matrix in `others`.
inline StarAlgebra relative_commutant(const StarAlgebra& a, std::span<const ComplexMatrix> others) {
  const Index d = a.dim();
  const Index k = a.dimension();
  Eigen::MatrixXcd coords = Eigen::MatrixXcd::Identity(k, k);
  for (const auto& s : others) {
    a.check_shape(s);
    if (coords.cols() == 0) break;
    const double scale = s.norm();
    if (scale == 0.0) continue;
    const detail::Operand op(s);
    const Eigen::MatrixXcd elems = a.combine(coords);
    Eigen::MatrixXcd constraints(d * d, coords.cols());
    for (Index j = 0; j < coords.cols(); ++j) {
      const ComplexMatrix e = detail::unvec(elems.col(j).data(), d);
      constraints.col(j) = detail::vec(op.commutator_with(e));
    }
    const Eigen::MatrixXcd kernel = detail::null_space(constraints, a.tol(), scale);
    coords = coords * kernel;
  }
  detail::OrthonormalSpan span(d * d, a.tol());
  span.absorb(a.combine(coords));
  StarAlgebra out(d, std::move(span).take(), {}, a.tol());
  switch (a.trace_kind()) {
    case StarAlgebra::TraceKind::Vector: return out.with_trace_vector(*a.trace_vector());
    case StarAlgebra::TraceKind::Density: return out.with_density(a.density());
    case StarAlgebra::TraceKind::NormalizedMatrix: break;
  }
  return out;
}

/// Z(A) = A intersected with its commutant; carries the state of A.
inline StarAlgebra center(const StarAlgebra& a) {
  const auto set = a.commutation_set();
  return relative_commutant(a, set);
}

/// Full commutant {m in M_d : m b = b m for all b in A}, solved as the null
/// space of the linear commutation system. Ambient dimension is capped.
inline StarAlgebra commutant(const StarAlgebra& a, const Caps& caps = {}) {
  const Index d = a.dim();
  check_cap("commutant ambient dimension", static_cast<std::uint64_t>(d), caps.commutant_dim);
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  Eigen::MatrixXcd sol = Eigen::MatrixXcd::Identity(d * d, d * d);
  for (const auto& s : a.commutation_set()) {
    if (sol.cols() == 0) break;
    const double scale = s.norm();
    if (scale == 0.0) continue;
    // vec(m s - s m) = (s^T (x) I - I (x) s) vec(m)
    const Eigen::MatrixXcd system = detail::kron(ComplexMatrix(s.transpose()), id) - detail::kron(id, s);
    const Eigen::MatrixXcd kernel = detail::null_space(system * sol, a.tol(), scale);
    sol = sol * kernel;
  }
  detail::OrthonormalSpan span(d * d, a.tol());
  span.absorb(sol);
  return StarAlgebra(d, std::move(span).take(), {}, a.tol());
}

/// True when A and B have the same span (equal dimension, B inside A).
inline bool same_span(const StarAlgebra& a, const StarAlgebra& b, double tol) {
  if (a.dim() != b.dim() || a.dimension() != b.dimension()) return false;
  for (Index i = 0; i < b.dimension(); ++i)
    if (a.residual(b.basis(i)) > tol) return false;
  return true;
}

inline StarAlgebra scalars(Index d, double tol = kDefaultTol) { return generate_algebra(d, {}, tol); }

inline StarAlgebra full_matrix_algebra(Index d, double tol = kDefaultTol) {
  Eigen::MatrixXcd q = Eigen::MatrixXcd::Identity(d * d, d * d);
  std::vector<ComplexMatrix> gens;
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      ComplexMatrix e = ComplexMatrix::Zero(d, d);
      e(i, j) = 1.0;
      gens.push_back(std::move(e));
    }
  return StarAlgebra(d, std::move(q), std::move(gens), tol);
}

inline StarAlgebra diagonal_algebra(Index d, double tol = kDefaultTol) {
  std::vector<ComplexMatrix> gens;
  for (Index i = 0; i < d; ++i) {
    ComplexMatrix e = ComplexMatrix::Zero(d, d);
    e(i, i) = 1.0;
    gens.push_back(std::move(e));
  }
  return generate_algebra(d, gens, tol);
}

/// One summand M_n of the central decomposition.
struct CentralBlock {
  int size = 0;        // n_i
  double weight = 0;   // c_i = tau(p_i)
  ComplexMatrix projection;  // minimal central projection p_i
};

struct CentralDecomposition {
  Index dimension = 0;
  Index center_dim = 0;
  std::vector<CentralBlock> blocks;
};

struct BlockSummary {
  int size = 0;
  double weight = 0;
};

/// Summary of A = sum_i M_{n_i} with trace weights c_i.
struct AlgebraReport {
  Index dimension = 0;
  Index center_dim = 0;
  bool is_factor = false;
  std::vector<BlockSummary> blocks;  // canonical block order
};

namespace detail {

/// Lexicographic order on projection entries, larger first; used to give
/// blocks a reproducible order independent of the random central element.
inline bool projection_before(const ComplexMatrix& a, const ComplexMatrix& b) {
  constexpr double kEps = 1e-7;
  for (Index i = 0; i < a.size(); ++i) {
    const double ar = a.data()[i].real(), br = b.data()[i].real();
    if (std::abs(ar - br) > kEps) return ar > br;
  }
  for (Index i = 0; i < a.size(); ++i) {
    const double ai = a.data()[i].imag(), bi = b.data()[i].imag();
    if (std::abs(ai - bi) > kEps) return ai > bi;
  }
  return false;
}

}  // namespace detail

/// Splits A into its central summands.
///
/// A generic self-adjoint central element (seeded random real combination of
/// a Hermitian spanning set of the center) is diagonalised; its eigenspaces
/// are the minimal central projections. Colliding eigenvalues trigger a
/// redraw, at most 16 times. Block sizes come from n_i^2 = rank of x -> x p_i
/// on A, which equals tr(sum_j b_j* b_j p_i) for an orthonormal basis b_j.
inline CentralDecomposition central_decomposition(const StarAlgebra& a, std::uint64_t seed = kDefaultSeed) {
  const Index d = a.dim();
  const StarAlgebra z = center(a);
  CentralDecomposition out;
  out.dimension = a.dimension();
  out.center_dim = z.dimension();

  std::vector<ComplexMatrix> projections;
  if (z.dimension() <= 1) {
    projections.push_back(ComplexMatrix::Identity(d, d));
  } else {
    std::vector<ComplexMatrix> hermitian;
    for (Index i = 0; i < z.dimension(); ++i) {
      const ComplexMatrix m = z.basis(i);
      const ComplexMatrix re = (m + m.adjoint()) / 2.0;
      const ComplexMatrix im = (m - m.adjoint()) / Complex(0.0, 2.0);
      if (re.norm() > a.tol()) hermitian.push_back(re);
      if (im.norm() > a.tol()) hermitian.push_back(im);
    }
    const double cluster_tol = std::min(std::sqrt(a.tol()), 1e-3);
    bool found = false;
    for (int attempt = 0; attempt < 16 && !found; ++attempt) {
      std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
      std::uniform_real_distribution<double> coef(-1.0, 1.0);
      ComplexMatrix c = ComplexMatrix::Zero(d, d);
      for (const auto& h : hermitian) c += coef(rng) * h;
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(c);
      const Eigen::VectorXd& vals = eig.eigenvalues();
      const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
      projections.clear();
      Index start = 0;
      for (Index i = 1; i <= d; ++i) {
        if (i == d || vals(i) - vals(i - 1) > cluster_tol * scale) {
          const auto v = eig.eigenvectors().middleCols(start, i - start);
          projections.push_back(v * v.adjoint());
          start = i;
        }
      }
      found = static_cast<Index>(projections.size()) == z.dimension();
    }
    if (!found) throw NumericalFailure("central element eigenvalues collided in 16 draws");
  }

  ComplexMatrix casimir = ComplexMatrix::Zero(d, d);
  for (Index j = 0; j < a.dimension(); ++j) {
    const auto b = a.basis(j);
    casimir.noalias() += b.adjoint() * b;
  }
  std::sort(projections.begin(), projections.end(), detail::projection_before);
  Index total = 0;
  for (std::size_t i = 0; i < projections.size(); ++i) {
    const double sq = casimir.transpose().cwiseProduct(projections[i]).sum().real();
    const int n = static_cast<int>(std::lround(std::sqrt(std::max(0.0, sq))));
    if (n < 1 || std::abs(sq - n * n) > 1e-6 * std::max(1.0, sq))
      throw NumericalFailure("central block " + std::to_string(i) + " has non-square dimension " + std::to_string(sq));
    const double w = a.trace_unchecked(projections[i]).real();
    if (w < a.tol())
      throw FaithfulnessFailure("trace vanishes on minimal central projection " + std::to_string(i) +
                                " (tau(p) = " + std::to_string(w) + ")");
    total += static_cast<Index>(n) * n;
    out.blocks.push_back(CentralBlock{n, w, std::move(projections[i])});
  }
  if (total != a.dimension())
    throw NumericalFailure("block sizes do not account for the algebra dimension");
  return out;
}

inline AlgebraReport summarize(const CentralDecomposition& dec) {
  AlgebraReport r;
  r.dimension = dec.dimension;
  r.center_dim = dec.center_dim;
  r.is_factor = dec.center_dim == 1;
  for (const auto& b : dec.blocks) r.blocks.push_back({b.size, b.weight});
  return r;
}

inline AlgebraReport analyze(const StarAlgebra& a, std::uint64_t seed = kDefaultSeed) {
  return summarize(central_decomposition(a, seed));
}

/// Replaces the state by sum_i c_i * (normalised trace on block i); weights
/// follow the canonical block order of `analyze`.
inline StarAlgebra with_block_weights(const StarAlgebra& a, const std::vector<double>& weights,
                                      std::uint64_t seed = kDefaultSeed) {
  const auto dec = central_decomposition(a.with_normalized_trace(), seed);
  if (weights.size() != dec.blocks.size())
    throw InputError("expected " + std::to_string(dec.blocks.size()) + " block weights, got " +
                     std::to_string(weights.size()));
  double sum = 0;
  for (double w : weights) {
    if (!(w > 0)) throw InputError("block weights must be positive");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw InputError("block weights must sum to 1");
  ComplexMatrix rho = ComplexMatrix::Zero(a.dim(), a.dim());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const auto& p = dec.blocks[i].projection;
    rho += weights[i] / p.trace().real() * p;
  }
  return a.with_density(rho, weights);
}

/// Achievable projection traces {sum_i c_i k_i / n_i : 0 <= k_i <= n_i}, sorted.
inline std::vector<double> trace_spectrum(const AlgebraReport& report) {
  std::vector<double> values{0.0};
  for (const auto& b : report.blocks) {
    std::vector<double> next;
    next.reserve(values.size() * static_cast<std::size_t>(b.size + 1));
    for (double v : values)
      for (int k = 0; k <= b.size; ++k) next.push_back(v + b.weight * k / b.size);
    std::sort(next.begin(), next.end());
    values.clear();
    for (double v : next)
      if (values.empty() || v - values.back() > 1e-12) values.push_back(v);
  }
  return values;
}

inline std::vector<double> trace_spectrum(const StarAlgebra& a, std::uint64_t seed = kDefaultSeed) {
  return trace_spectrum(analyze(a, seed));
}

/// A (x) B spanned by Kronecker products of basis elements, with product state.
inline StarAlgebra tensor(const StarAlgebra& a, const StarAlgebra& b) {
  const Index d = a.dim() * b.dim();
  Eigen::MatrixXcd q(d * d, a.dimension() * b.dimension());
  Index col = 0;
  for (Index i = 0; i < a.dimension(); ++i)
    for (Index j = 0; j < b.dimension(); ++j) {
      const ComplexMatrix k = detail::kron(ComplexMatrix(a.basis(i)), ComplexMatrix(b.basis(j)));
      q.col(col++) = detail::vec(k);
    }
  std::vector<ComplexMatrix> gens;
  const ComplexMatrix ia = ComplexMatrix::Identity(a.dim(), a.dim());
  const ComplexMatrix ib = ComplexMatrix::Identity(b.dim(), b.dim());
  for (const auto& g : a.generators().empty() ? a.commutation_set() : a.generators())
    gens.push_back(detail::kron(g, ib));
  for (const auto& h : b.generators().empty() ? b.commutation_set() : b.generators())
    gens.push_back(detail::kron(ia, h));
  StarAlgebra out(d, std::move(q), std::move(gens), std::max(a.tol(), b.tol()));
  using K = StarAlgebra::TraceKind;
  if (a.trace_kind() == K::NormalizedMatrix && b.trace_kind() == K::NormalizedMatrix) return out;
  if (a.trace_kind() == K::Vector && b.trace_kind() == K::Vector)
    return out.with_trace_vector(detail::kron(*a.trace_vector(), *b.trace_vector()));
  return out.with_density(detail::kron(a.density(), b.density()));
}

}  // namespace vnlab
