#pragma once

// ITPFI specifications and T-set membership.
//
// term_i(t) = 1 - |sum_k alpha_k^(1+it)|, alpha^(1+it) = alpha exp(it ln alpha).
// For eventually periodic specs the terms repeat, so the series converges
// iff every term of the repeating block vanishes.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vnlab/error.hpp"

namespace vnlab {

using EigenvalueList = std::vector<double>;

inline void validate_eigenvalues(const EigenvalueList& alpha, const std::string& where) {
  if (alpha.empty()) throw InputError(where + ": empty eigenvalue list");
  double sum = 0;
  for (double a : alpha) {
    if (!std::isfinite(a) || a <= 0) throw InputError(where + ": eigenvalues must be positive and finite");
    sum += a;
  }
  if (std::abs(sum - 1.0) > 1e-12) throw InputError(where + ": eigenvalues sum to " + std::to_string(sum) + ", not 1");
}

class ITPFISpec {
 public:
  enum class Kind { Constant, EventuallyPeriodic, Explicit };

  static ITPFISpec constant(EigenvalueList alpha) {
    validate_eigenvalues(alpha, "constant spec");
    return ITPFISpec(Kind::Constant, {}, {std::move(alpha)});
  }
  static ITPFISpec periodic(std::vector<EigenvalueList> prefix, std::vector<EigenvalueList> cycle) {
    if (cycle.empty()) throw InputError("periodic spec needs a nonempty cycle");
    for (std::size_t i = 0; i < prefix.size(); ++i) validate_eigenvalues(prefix[i], "prefix[" + std::to_string(i) + "]");
    for (std::size_t i = 0; i < cycle.size(); ++i) validate_eigenvalues(cycle[i], "cycle[" + std::to_string(i) + "]");
    return ITPFISpec(Kind::EventuallyPeriodic, std::move(prefix), std::move(cycle));
  }
  /// Finitely many factors; only partial sums are available.
  static ITPFISpec explicit_list(std::vector<EigenvalueList> factors) {
    for (std::size_t i = 0; i < factors.size(); ++i)
      validate_eigenvalues(factors[i], "factor[" + std::to_string(i) + "]");
    return ITPFISpec(Kind::Explicit, std::move(factors), {});
  }

  Kind kind() const noexcept { return kind_; }
  const std::vector<EigenvalueList>& prefix() const noexcept { return prefix_; }
  const std::vector<EigenvalueList>& cycle() const noexcept { return cycle_; }
  bool infinite() const noexcept { return kind_ != Kind::Explicit; }
  /// Number of factors for Explicit specs.
  std::size_t defined_factors() const noexcept { return prefix_.size(); }

  /// Eigenvalue list of factor i (0-based).
  const EigenvalueList& factor(std::size_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    if (kind_ == Kind::Explicit)
      throw InputError("factor " + std::to_string(i) + " beyond the " + std::to_string(prefix_.size()) + " defined");
    return cycle_[(i - prefix_.size()) % cycle_.size()];
  }

 private:
  ITPFISpec(Kind kind, std::vector<EigenvalueList> prefix, std::vector<EigenvalueList> cycle)
      : kind_(kind), prefix_(std::move(prefix)), cycle_(std::move(cycle)) {}
  Kind kind_;
  std::vector<EigenvalueList> prefix_;
  std::vector<EigenvalueList> cycle_;
};

inline EigenvalueList powers_eigenvalues(double lambda) {
  if (!(lambda > 0 && lambda < 1)) throw InputError("lambda must lie in (0, 1)");
  return {1.0 / (1.0 + lambda), lambda / (1.0 + lambda)};
}

/// R_lambda: every factor is M_2 with state Tr(rho_lambda .).
inline ITPFISpec powers_spec(double lambda) { return ITPFISpec::constant(powers_eigenvalues(lambda)); }

inline Eigen::Matrix2d powers_density_matrix(double lambda) {
  const auto e = powers_eigenvalues(lambda);
  Eigen::Matrix2d rho = Eigen::Matrix2d::Zero();
  rho(0, 0) = e[0];
  rho(1, 1) = e[1];
  return rho;
}

/// 1 - |sum_k alpha_k exp(i t ln alpha_k)| for one eigenvalue list.
inline double list_term(const EigenvalueList& alpha, double t) {
  std::complex<double> s = 0;
  for (double a : alpha) s += a * std::polar(1.0, t * std::log(a));
  return std::clamp(1.0 - std::abs(s), 0.0, 1.0);
}

inline double tset_term(const ITPFISpec& spec, std::size_t i, double t) { return list_term(spec.factor(i), t); }

struct TsetVerdict {
  enum class Kind { In, Out, Undecided };
  Kind kind = Kind::Undecided;
  double block_max_term = 0;  // largest term of the repeating block
  double partial_sum = 0;     // Explicit only
  std::size_t terms = 0;      // Explicit only

  std::string str() const {
    switch (kind) {
      case Kind::In: return "In";
      case Kind::Out: return "Out";
      case Kind::Undecided: break;
    }
    return "Undecided";
  }
};

inline TsetVerdict tset_membership(const ITPFISpec& spec, double t, double zero_tol = 1e-12,
                                   std::size_t max_terms = 100000) {
  TsetVerdict v;
  if (spec.infinite()) {
    for (const auto& alpha : spec.cycle()) v.block_max_term = std::max(v.block_max_term, list_term(alpha, t));
    v.kind = v.block_max_term < zero_tol ? TsetVerdict::Kind::In : TsetVerdict::Kind::Out;
    return v;
  }
  v.terms = std::min(spec.defined_factors(), max_terms);
  for (std::size_t i = 0; i < v.terms; ++i) v.partial_sum += tset_term(spec, i, t);
  v.kind = TsetVerdict::Kind::Undecided;
  return v;
}

/// Closed form for R_lambda: t is in T iff lambda^(it) = 1, tested as
/// |exp(i t ln lambda) - 1| < phase_tol.
inline bool powers_closed_form(double lambda, double t, double phase_tol = 1e-6) {
  powers_eigenvalues(lambda);
  return std::abs(std::polar(1.0, t * std::log(lambda)) - 1.0) < phase_tol;
}

struct TsetRow {
  double t = 0;
  TsetVerdict verdict;
};

inline std::vector<TsetRow> tset_scan(const ITPFISpec& spec, const std::vector<double>& grid, double zero_tol = 1e-12) {
  std::vector<TsetRow> rows;
  for (double t : grid) rows.push_back({t, tset_membership(spec, t, zero_tol)});
  return rows;
}

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// CSV with columns t,verdict,maxBlockTerm.
inline std::string tset_csv(const std::vector<TsetRow>& rows) {
  std::string out = "t,verdict,maxBlockTerm\n";
  for (const auto& r : rows) {
    const double shown = r.verdict.kind == TsetVerdict::Kind::Undecided ? r.verdict.partial_sum : r.verdict.block_max_term;
    out += format_real(r.t) + "," + r.verdict.str() + "," + format_real(shown) + "\n";
  }
  return out;
}

/// Lattice grid m * 2 pi / |ln lambda| for m = lo..hi.
inline std::vector<double> powers_lattice(double lambda, int lo, int hi) {
  powers_eigenvalues(lambda);
  const double step = 2.0 * M_PI / std::abs(std::log(lambda));
  std::vector<double> out;
  for (int m = lo; m <= hi; ++m) out.push_back(m * step);
  return out;
}

/// Alternating interleave s1[0], s2[0], s1[1], s2[1], ...
inline ITPFISpec tensor_spec(const ITPFISpec& a, const ITPFISpec& b) {
  if (a.infinite() && b.infinite()) {
    const std::size_t pre = std::max(a.prefix().size(), b.prefix().size());
    const std::size_t per = std::lcm(a.cycle().size(), b.cycle().size());
    std::vector<EigenvalueList> prefix, cycle;
    for (std::size_t i = 0; i < pre; ++i) {
      prefix.push_back(a.factor(i));
      prefix.push_back(b.factor(i));
    }
    for (std::size_t i = pre; i < pre + per; ++i) {
      cycle.push_back(a.factor(i));
      cycle.push_back(b.factor(i));
    }
    return ITPFISpec::periodic(std::move(prefix), std::move(cycle));
  }
  const std::size_t na = a.infinite() ? SIZE_MAX : a.defined_factors();
  const std::size_t nb = b.infinite() ? SIZE_MAX : b.defined_factors();
  const std::size_t n = std::min(na, nb);
  std::vector<EigenvalueList> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(a.factor(i));
    out.push_back(b.factor(i));
  }
  return ITPFISpec::explicit_list(std::move(out));
}

}  // namespace vnlab
