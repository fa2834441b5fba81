#pragma once

// Numbered acceptance criteria with runtime limits. Each criterion yields a
// deterministic verdict line; timings are kept apart so that two runs with
// the same options produce identical report text.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "vnlab/catalog.hpp"
#include "vnlab/crossed.hpp"
#include "vnlab/groupvna.hpp"
#include "vnlab/itpfi.hpp"
#include "vnlab/mekler.hpp"
#include "vnlab/redux.hpp"
#include "vnlab/staralg.hpp"

namespace vnlab {

using MeklerMul = std::function<MeklerElement(const MeklerGroup&, const MeklerElement&, const MeklerElement&)>;

struct AcceptanceOptions {
  std::uint64_t seed = kDefaultSeed;
  double tol = kDefaultTol;
  Caps caps;
  NiceVariant nice = NiceVariant::Literal;
  MeklerMul mekler_mul;    // replaces MeklerGroup::mul when set
  std::vector<int> only;   // criterion ids; empty runs all
};

struct CriterionResult {
  int id = 0;
  std::string title;
  bool ok = false;
  std::string detail;
  double seconds = 0;
  double limit_seconds = 0;

  bool timely() const { return seconds < limit_seconds; }
  bool passed() const { return ok && timely(); }

  std::string report_line() const {
    return std::to_string(id) + " " + title + ": " + (ok ? "ok" : "FAILED") + " - " + detail;
  }
  std::string table_line() const {
    char timing[96];
    std::snprintf(timing, sizeof timing, " (%.2f s, limit %.0f s%s)", seconds, limit_seconds, timely() ? "" : ", EXCEEDED");
    return std::string(passed() ? "PASS" : "FAIL") + " criterion " + report_line() + timing;
  }
};

struct AcceptanceReport {
  std::vector<CriterionResult> results;

  bool passed() const {
    return std::all_of(results.begin(), results.end(), [](const CriterionResult& r) { return r.passed(); });
  }
  /// Verdicts and details only.
  std::string text() const {
    std::string s;
    for (const auto& r : results) s += r.report_line() + "\n";
    return s;
  }
  std::string table() const {
    std::string s;
    for (const auto& r : results) s += r.table_line() + "\n";
    std::size_t pass = 0;
    for (const auto& r : results) pass += r.passed() ? 1 : 0;
    s += std::to_string(pass) + "/" + std::to_string(results.size()) + " criteria passed\n";
    return s;
  }
};

// ---------------------------------------------------------------- Mekler law check

struct MeklerLawReport {
  bool exhaustive = false;
  std::uint64_t triples = 0;
  std::uint64_t failures = 0;
  std::string witness;
};

/// Associativity, identity and inverse laws under mul: every triple when
/// |G|^3 <= samples, otherwise samples random triples.
inline MeklerLawReport mekler_law_check(const MeklerGroup& g, const MeklerMul& mul, std::uint64_t samples,
                                        std::uint64_t seed) {
  MeklerLawReport r;
  const auto ord = g.order();
  const auto e = g.identity();
  const auto check = [&](const MeklerElement& x, const MeklerElement& y, const MeklerElement& z) {
    ++r.triples;
    const bool assoc = mul(g, mul(g, x, y), z) == mul(g, x, mul(g, y, z));
    const bool unit = mul(g, x, e) == x && mul(g, e, x) == x;
    const bool inverse = mul(g, x, g.inv(x)) == e && mul(g, g.inv(x), x) == e;
    if (assoc && unit && inverse) return;
    if (r.failures++ == 0)
      r.witness = std::string(assoc ? (unit ? "inverse" : "identity") : "associativity") + " fails at " + g.format(x) +
                  " " + g.format(y) + " " + g.format(z);
  };
  r.exhaustive = ord <= 1000000 && ord * ord * ord <= samples;
  if (r.exhaustive) {
    for (std::uint64_t i = 0; i < ord; ++i)
      for (std::uint64_t j = 0; j < ord; ++j)
        for (std::uint64_t k = 0; k < ord; ++k) check(g.decode(i), g.decode(j), g.decode(k));
    return r;
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> digit(0, g.p() - 1);
  const auto random_element = [&] {
    auto x = g.identity();
    for (auto& c : x.a) c = digit(rng);
    for (auto& c : x.b) c = digit(rng);
    return x;
  };
  for (std::uint64_t t = 0; t < samples; ++t) {
    const auto x = random_element();
    const auto y = random_element();
    check(x, y, random_element());
  }
  return r;
}

inline MeklerMul library_mekler_mul() {
  return [](const MeklerGroup& g, const MeklerElement& x, const MeklerElement& y) { return g.mul(x, y); };
}

namespace detail {

inline std::string fmt_count(std::size_t a, std::size_t b) { return std::to_string(a) + "/" + std::to_string(b); }

// ---- random structured subalgebras U (sum_i M_{n_i} (x) 1_{m_i}) U*

inline ComplexMatrix haar_unitary(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0, 1);
  ComplexMatrix m(d, d);
  for (Index i = 0; i < m.size(); ++i) m.data()[i] = Complex(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  return qr.householderQ();
}

struct BlockShape {
  std::vector<std::pair<int, int>> summands;  // (n, multiplicity)
  Index dim() const {
    Index d = 0;
    for (auto [n, m] : summands) d += n * m;
    return d;
  }
};

inline BlockShape random_block_shape(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> dim_pick(2, 6);
  int left = dim_pick(rng);
  BlockShape s;
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

inline ComplexMatrix random_block_element(const BlockShape& s, const ComplexMatrix& u, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0, 1);
  const Index d = s.dim();
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  Index off = 0;
  for (auto [n, m] : s.summands) {
    ComplexMatrix x(n, n);
    for (Index i = 0; i < x.size(); ++i) x.data()[i] = Complex(gauss(rng), gauss(rng));
    out.block(off, off, n * m, n * m) = kron(x, ComplexMatrix(ComplexMatrix::Identity(m, m)));
    off += n * m;
  }
  return u * out * u.adjoint();
}

// ---- enumerable character-support centralizer by plain loops

inline std::vector<FinGroup::Element> brute_char_support_centralizer(const FinGroup& g) {
  const auto n = g.order();
  std::vector<bool> in_derived(n, false);
  std::vector<FinGroup::Element> derived{g.identity()};
  in_derived[g.identity()] = true;
  for (FinGroup::Element x = 0; x < n; ++x)
    for (FinGroup::Element y = 0; y < n; ++y) {
      const auto c = g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y)));
      if (!in_derived[c]) {
        in_derived[c] = true;
        derived.push_back(c);
      }
    }
  for (std::size_t i = 0; i < derived.size(); ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (const auto c : {g.mul(derived[i], derived[j]), g.mul(derived[j], derived[i])})
        if (!in_derived[c]) {
          in_derived[c] = true;
          derived.push_back(c);
        }
  std::vector<FinGroup::Element> out;
  for (FinGroup::Element x = 0; x < n; ++x) {
    bool commutes = true;
    for (FinGroup::Element d = 0; d < n && commutes; ++d)
      if (!in_derived[d]) commutes = g.mul(x, d) == g.mul(d, x);
    if (commutes) out.push_back(x);
  }
  return out;
}

// ---- G(graph) : H in symmetric coordinates
//
// (alpha, beta) (alpha', beta') = (alpha + alpha', beta + beta' + omega(alpha, alpha') / 2)
// with omega_uv = alpha_v alpha'_u - alpha_u alpha'_v on each non-edge u < v.
// Vertex permutations act linearly; normal form (a, b) is (a, b - a_u a_v / 2).

class SymmetricSemidirect {
 public:
  struct Elem {
    std::vector<int> alpha, beta;
    FinGroup::Element h = 0;
  };

  SymmetricSemidirect(const SimpleGraph& graph, int p, FinGroup acting, std::vector<VertexMap> perms)
      : n_(graph.size()), p_(p), half_((p + 1) / 2), pairs_(graph.non_edges()), acting_(std::move(acting)),
        perms_(std::move(perms)) {
    slot_.assign(n_ * n_, -1);
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      const auto [u, v] = pairs_[i];
      slot_[u * n_ + v] = slot_[v * n_ + u] = static_cast<int>(i);
    }
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return pairs_.size(); }

  Elem generator(std::size_t v) const {
    Elem x{std::vector<int>(n_, 0), std::vector<int>(m(), 0), acting_.identity()};
    x.alpha[v] = 1;
    return x;
  }
  Elem acting_element(FinGroup::Element h) const {
    return {std::vector<int>(n_, 0), std::vector<int>(m(), 0), h};
  }

  /// sigma_h on the (alpha, beta) part.
  void act(FinGroup::Element h, const Elem& x, Elem& out) const {
    const auto& pi = perms_[h];
    out.alpha.assign(n_, 0);
    out.beta.assign(m(), 0);
    for (std::size_t v = 0; v < n_; ++v) out.alpha[pi[v]] = x.alpha[v];
    for (std::size_t i = 0; i < m(); ++i) {
      const auto [u, v] = pairs_[i];
      const auto j = static_cast<std::size_t>(slot_[pi[u] * n_ + pi[v]]);
      out.beta[j] = pi[u] < pi[v] ? x.beta[i] : (p_ - x.beta[i]) % p_;
    }
    out.h = x.h;
  }

  /// x * y where y is already twisted by sigma_{x.h}; alpha parts compared first.
  bool commutes(const Elem& x, const Elem& y_twisted_by_x, const Elem& y, Elem& scratch) const {
    act(y.h, x, scratch);
    for (std::size_t v = 0; v < n_; ++v)
      if ((x.alpha[v] + y_twisted_by_x.alpha[v]) % p_ != (y.alpha[v] + scratch.alpha[v]) % p_) return false;
    if (acting_.mul(x.h, y.h) != acting_.mul(y.h, x.h)) return false;
    for (std::size_t i = 0; i < m(); ++i) {
      const auto [u, v] = pairs_[i];
      const int left = x.beta[i] + y_twisted_by_x.beta[i] +
                       half_ * (x.alpha[v] * y_twisted_by_x.alpha[u] - x.alpha[u] * y_twisted_by_x.alpha[v]);
      const int right = y.beta[i] + scratch.beta[i] + half_ * (y.alpha[v] * scratch.alpha[u] - y.alpha[u] * scratch.alpha[v]);
      if (((left - right) % p_ + p_) % p_ != 0) return false;
    }
    return true;
  }

  /// Every element commuting with each of tests, by enumeration.
  std::vector<Elem> centralizer(const std::vector<Elem>& tests) const {
    std::vector<std::vector<Elem>> twisted(acting_.order());
    for (FinGroup::Element h = 0; h < acting_.order(); ++h)
      for (const auto& y : tests) {
        Elem t;
        act(h, y, t);
        twisted[h].push_back(t);
      }
    std::vector<Elem> out;
    Elem x{std::vector<int>(n_, 0), std::vector<int>(m(), 0), 0};
    Elem scratch;
    const std::size_t digits = n_ + m();
    for (FinGroup::Element h = 0; h < acting_.order(); ++h) {
      x.h = h;
      std::fill(x.alpha.begin(), x.alpha.end(), 0);
      std::fill(x.beta.begin(), x.beta.end(), 0);
      for (;;) {
        bool all = true;
        for (std::size_t k = 0; k < tests.size() && all; ++k) all = commutes(x, twisted[h][k], tests[k], scratch);
        if (all) out.push_back(x);
        std::size_t d = 0;
        for (; d < digits; ++d) {
          int& digit = d < n_ ? x.alpha[d] : x.beta[d - n_];
          if (++digit < p_) break;
          digit = 0;
        }
        if (d == digits) break;
      }
    }
    return out;
  }

  MeklerSemidirect::Element to_normal_form(const Elem& x) const {
    MeklerElement g{std::vector<std::uint32_t>(n_), std::vector<std::uint32_t>(m())};
    for (std::size_t v = 0; v < n_; ++v) g.a[v] = static_cast<std::uint32_t>(x.alpha[v]);
    for (std::size_t i = 0; i < m(); ++i) {
      const auto [u, v] = pairs_[i];
      g.b[i] = static_cast<std::uint32_t>((x.beta[i] + half_ * x.alpha[u] * x.alpha[v]) % p_);
    }
    return {g, x.h};
  }

 private:
  std::size_t n_;
  int p_;
  int half_;
  std::vector<SimpleGraph::Edge> pairs_;
  std::vector<int> slot_;
  FinGroup acting_;
  std::vector<VertexMap> perms_;
};

template <class Body>
CriterionResult timed(int id, std::string title, double limit, Body&& body) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  r.limit_seconds = limit;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.ok = false;
    r.detail = error_kind(e) + ": " + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace detail

// ---------------------------------------------------------------- criteria

inline CriterionResult criterion_factor_law(const AcceptanceOptions& o) {
  return detail::timed(1, "crossed-product factor law", 60, [&](CriterionResult& r) {
    std::size_t checked = 0, agree = 0;
    std::string bad;
    for (const auto& e : action_catalog(o.caps)) {
      const auto rep = action_report(e.action);
      if (!rep.is_free) continue;
      const bool factor = analyze(crossed_product(e.action, o.caps, o.tol).algebra(), o.seed).is_factor;
      ++checked;
      if (factor == rep.is_ergodic) ++agree;
      else if (bad.empty()) bad = e.name;
    }
    r.ok = checked > 0 && agree == checked;
    r.detail = "isFactor == isErgodic on " + detail::fmt_count(agree, checked) + " free actions";
    if (!bad.empty()) r.detail += "; first disagreement: " + bad;
  });
}

inline CriterionResult criterion_masa(const AcceptanceOptions& o) {
  return detail::timed(2, "MASA criterion", 60, [&](CriterionResult& r) {
    std::size_t free_n = 0, free_masa = 0, nonfree_n = 0, nonfree_not_masa = 0;
    for (const auto& e : action_catalog(o.caps)) {
      const bool free = is_free(e.action);
      const bool masa = cartan_report(crossed_product(e.action, o.caps, o.tol), o.seed).is_masa;
      if (free) {
        ++free_n;
        free_masa += masa ? 1 : 0;
      } else {
        ++nonfree_n;
        nonfree_not_masa += masa ? 0 : 1;
      }
    }
    r.ok = free_masa == free_n && nonfree_not_masa == nonfree_n;
    r.detail = "free => MASA on " + detail::fmt_count(free_masa, free_n) + "; converse (non-free => not MASA) on " +
               detail::fmt_count(nonfree_not_masa, nonfree_n);
  });
}

inline CriterionResult criterion_trace(const AcceptanceOptions& o) {
  return detail::timed(3, "trace identities", 30, [&](CriterionResult& r) {
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double integral_err = 0, tracial_err = 0;
    std::size_t algebras = 0;
    for (const auto& e : action_catalog(o.caps)) {
      const auto cp = crossed_product(e.action, o.caps, o.tol);
      const auto& a = cp.algebra();
      const auto& grp = e.action.group();
      const auto random_coeffs = [&] {
        std::vector<ComplexVector> f(grp.order(), ComplexVector(cp.atoms()));
        for (auto& v : f)
          for (Index x = 0; x < v.size(); ++x) v(x) = Complex(gauss(rng), gauss(rng));
        return f;
      };
      for (int k = 0; k < 100; ++k) {
        const auto f = random_coeffs();
        const Complex lhs = a.trace(cp.monomial_sum(f));
        const Complex rhs = cp.integral(f[grp.identity()]);
        integral_err = std::max(integral_err, std::abs(lhs - rhs));
      }
      for (int k = 0; k < 100; ++k) {
        const ComplexMatrix x = cp.monomial_sum(random_coeffs());
        const ComplexMatrix y = cp.monomial_sum(random_coeffs());
        tracial_err = std::max(tracial_err, std::abs(a.trace_unchecked(x * y) - a.trace_unchecked(y * x)));
      }
      ++algebras;
    }
    r.ok = algebras > 0 && integral_err < 1e-9 && tracial_err < 1e-9;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu crossed products; max |tau - integral| = %.1e, max |tau(xy) - tau(yx)| = %.1e",
                  algebras, integral_err, tracial_err);
    r.detail = buf;
  });
}

inline CriterionResult criterion_feldman_moore(const AcceptanceOptions& o) {
  return detail::timed(4, "finite Feldman-Moore", 60, [&](CriterionResult& r) {
    std::vector<FiniteAction> actions;
    for (const auto& e : action_catalog(o.caps)) actions.push_back(e.action);
    const auto rep = feldman_moore_reduction(actions, o.caps);
    r.ok = rep.holds;
    r.detail = std::to_string(rep.pairs_checked) + " pairs, " + std::to_string(rep.total_counterexamples) +
               " counterexamples";
    if (!rep.counterexamples.empty()) r.detail += "; first: " + rep.counterexamples.front().description;
  });
}

inline CriterionResult criterion_double_commutant(const AcceptanceOptions& o) {
  return detail::timed(5, "double commutant", 30, [&](CriterionResult& r) {
    std::mt19937_64 rng(o.seed);
    std::size_t good = 0;
    const std::size_t trials = 50;
    for (std::size_t t = 0; t < trials; ++t) {
      const auto shape = detail::random_block_shape(rng);
      const ComplexMatrix u = detail::haar_unitary(shape.dim(), rng);
      const auto a = generate_algebra(
          shape.dim(), {detail::random_block_element(shape, u, rng), detail::random_block_element(shape, u, rng)}, o.tol);
      good += same_span(a, commutant(commutant(a, o.caps), o.caps), 1e-8) ? 1 : 0;
    }
    r.ok = good == trials;
    r.detail = "A'' = A on " + detail::fmt_count(good, trials) + " random subalgebras of M_2..M_6";
  });
}

inline CriterionResult criterion_group_blocks(const AcceptanceOptions& o) {
  return detail::timed(6, "group algebra blocks", 30, [&](CriterionResult& r) {
    std::size_t good = 0, total = 0;
    std::string bad;
    for (const auto& g : group_algebra_catalog()) {
      ++total;
      const auto rep = analyze(left_regular_algebra(g, o.caps, o.tol), o.seed);
      const auto classes = conjugacy_classes(g, o.caps).size();
      const auto linear = g.order() / derived_subgroup(g, o.caps).size();
      bool ok = static_cast<std::size_t>(rep.center_dim) == classes && rep.blocks.size() == classes;
      std::size_t ones = 0, square_sum = 0;
      for (const auto& b : rep.blocks) {
        ones += b.size == 1 ? 1 : 0;
        square_sum += static_cast<std::size_t>(b.size * b.size);
        ok = ok && std::abs(b.weight - static_cast<double>(b.size * b.size) / static_cast<double>(g.order())) < 1e-9;
      }
      ok = ok && ones == linear && square_sum == g.order();
      if (ok) ++good;
      else if (bad.empty()) bad = g.name();
    }
    r.ok = good == total;
    r.detail = "centre dimension = #classes and weights n_i^2/|G| on " + detail::fmt_count(good, total) + " groups";
    if (!bad.empty()) r.detail += "; first failure: " + bad;
  });
}

inline CriterionResult criterion_icc(const AcceptanceOptions& o) {
  return detail::timed(7, "ICC certificates", 60, [&](CriterionResult& r) {
    const auto z2 = named_oracle("Z2");
    bool lattice_fails = true;
    std::string mins;
    for (auto [inner, outer] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {1, 3}, {2, 3}, {2, 4}}) {
      const auto c = icc_certificate(z2, inner, outer, 10, o.caps);
      lattice_fails = lattice_fails && !c.passed && c.min_conjugates == 1;
      mins += (mins.empty() ? "" : ",") + std::to_string(c.min_conjugates);
    }
    const auto f2 = icc_certificate(named_oracle("F2"), 1, 3, 10, o.caps);
    const auto sl3 = icc_certificate(named_oracle("SL3Z"), 1, 2, 5, o.caps);
    r.ok = lattice_fails && f2.passed && sl3.passed;
    r.detail = "Z^2 min conjugates [" + mins + "]; F2 (1,3) min " + std::to_string(f2.min_conjugates) +
               (f2.passed ? " >= 10" : " < 10") + "; SL3Z (1,2) min " + std::to_string(sl3.min_conjugates) +
               (sl3.passed ? " >= 5" : " < 5");
  });
}

inline CriterionResult criterion_mekler_laws(const AcceptanceOptions& o) {
  return detail::timed(8, "Mekler group law", 60, [&](CriterionResult& r) {
    const MeklerMul mul = o.mekler_mul ? o.mekler_mul : library_mekler_mul();
    std::uint64_t failures = 0, triples = 0;
    std::string witness;
    const auto absorb = [&](const MeklerLawReport& rep) {
      failures += rep.failures;
      triples += rep.triples;
      if (witness.empty() && rep.failures) witness = rep.witness;
    };
    std::size_t small = 0;
    for (std::size_t n = 1; n <= 2; ++n)
      for (const auto& gr : all_graphs(n)) {
        const MeklerGroup g(gr, 3);
        const auto rep = mekler_law_check(g, mul, g.order() * g.order() * g.order(), o.seed);
        if (!rep.exhaustive) throw ConsistencyFailure("small Mekler law check was not exhaustive");
        absorb(rep);
        ++small;
      }
    const auto nice = nice_graphs(5, [&](const SimpleGraph& g) { return is_nice(g, o.nice); });
    for (std::size_t i = 0; i < nice.size(); ++i) absorb(mekler_law_check(MeklerGroup(nice[i], 3), mul, 100000, o.seed + i));
    std::size_t orders_ok = 0, orders = 0;
    for (std::size_t n = 1; n <= 3; ++n)
      for (const auto& gr : all_graphs(n)) {
        const MeklerGroup g(gr, 3);
        std::set<MeklerElement> seen{g.identity()};
        std::vector<MeklerElement> queue{g.identity()};
        for (std::size_t i = 0; i < queue.size(); ++i)
          for (std::size_t v = 0; v < g.n(); ++v) {
            auto y = mul(g, queue[i], g.generator(v));
            if (seen.insert(y).second) queue.push_back(std::move(y));
          }
        std::uint64_t expect = 1;
        for (std::size_t k = 0; k < gr.size() + gr.non_edges().size(); ++k) expect *= 3;
        ++orders;
        orders_ok += seen.size() == expect ? 1 : 0;
      }
    r.ok = failures == 0 && orders_ok == orders && !nice.empty();
    r.detail = std::to_string(triples) + " triples (" + std::to_string(small) + " groups exhaustive, " +
               std::to_string(nice.size()) + " nice graphs sampled), " + std::to_string(failures) +
               " law failures; order 3^(n+#nonedges) on " + detail::fmt_count(orders_ok, orders) + " graphs";
    if (!witness.empty()) r.detail += "; " + witness;
  });
}

inline CriterionResult criterion_mekler_biconditional(const AcceptanceOptions& o) {
  return detail::timed(9, "Mekler biconditional", 600, [&](CriterionResult& r) {
    const auto pred = [&](const SimpleGraph& g) { return is_nice(g, o.nice); };
    const auto small = nice_graphs(4, pred);
    std::size_t pairs = 0, disagreements = 0;
    std::string bad;
    for (std::size_t i = 0; i < small.size(); ++i)
      for (std::size_t j = i; j < small.size(); ++j) {
        ++pairs;
        const bool group_side = exact_iso(small[i], small[j], 3).isomorphic;
        const bool graph_side = graph_iso(small[i], small[j]).has_value();
        if (group_side != graph_side) {
          ++disagreements;
          if (bad.empty()) bad = small[i].str() + " vs " + small[j].str();
        }
      }
    const auto catalog = nice_graphs(5, pred);
    const auto red = mekler_fingerprint_reduction(catalog, 3);
    std::string collisions;
    for (const auto& c : red.counterexamples)
      if (c.side == Counterexample::Side::FOnly) collisions += (collisions.empty() ? "" : "; ") + c.description;
    r.ok = disagreements == 0 && red.holds && !small.empty();
    r.detail = std::to_string(small.size()) + " nice graphs on <= 4 vertices, " + std::to_string(pairs) +
               " pairs, " + std::to_string(disagreements) + " exact_iso disagreements; fingerprint reduction on " +
               std::to_string(catalog.size()) + " nice graphs on <= 5 vertices " + (red.holds ? "holds" : "fails") +
               ", fingerprint collisions: " + (collisions.empty() ? "none" : collisions);
    if (!bad.empty()) r.detail += "; first disagreement: " + bad;
  });
}

inline CriterionResult criterion_powers_lattice(const AcceptanceOptions& o) {
  return detail::timed(10, "Powers T-set lattice", 5, [&](CriterionResult& r) {
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> uniform(-20.0, 20.0);
    std::size_t lattice_ok = 0, lattice = 0, off_ok = 0, off = 0, agree = 0, compared = 0;
    for (double lambda : {0.25, 1.0 / 3, 0.5, 2.0 / 3}) {
      const auto spec = powers_spec(lambda);
      for (double t : powers_lattice(lambda, -5, 5)) {
        ++lattice;
        const bool in = tset_membership(spec, t, 1e-12).kind == TsetVerdict::Kind::In;
        lattice_ok += in ? 1 : 0;
        ++compared;
        agree += in == powers_closed_form(lambda, t) ? 1 : 0;
      }
      const double step = 2.0 * M_PI / std::abs(std::log(lambda));
      for (std::size_t k = 0; k < 100;) {
        const double t = uniform(rng);
        const double m = t / step;
        if (std::abs(m - std::round(m)) < 1e-3) continue;
        ++k;
        ++off;
        const bool in = tset_membership(spec, t, 1e-12).kind == TsetVerdict::Kind::In;
        off_ok += in ? 0 : 1;
        ++compared;
        agree += in == powers_closed_form(lambda, t) ? 1 : 0;
      }
    }
    r.ok = lattice_ok == lattice && off_ok == off && agree == compared;
    r.detail = "In on " + detail::fmt_count(lattice_ok, lattice) + " lattice points, Out on " +
               detail::fmt_count(off_ok, off) + " random points, closed form agrees on " + detail::fmt_count(agree, compared);
  });
}

inline CriterionResult criterion_tset_subgroup(const AcceptanceOptions& o) {
  return detail::timed(11, "T-set subgroup and symmetry", 5, [&](CriterionResult& r) {
    struct Case {
      ITPFISpec spec;
      double step;  // generator of the known lattice T
    };
    const double ln2 = std::log(2.0), ln3 = std::log(3.0);
    const std::vector<Case> cases{
        {ITPFISpec::periodic({}, {powers_eigenvalues(0.5)}), 2 * M_PI / ln2},
        {ITPFISpec::periodic({}, {powers_eigenvalues(0.5), powers_eigenvalues(0.25)}), 2 * M_PI / ln2},
        {ITPFISpec::periodic({{0.9, 0.1}}, {powers_eigenvalues(1.0 / 3)}), 2 * M_PI / ln3},
        {ITPFISpec::periodic({}, {{0.5, 0.25, 0.25}}), 2 * M_PI / ln2},
    };
    std::mt19937_64 rng(o.seed);
    std::uniform_int_distribution<int> multiple(-6, 6);
    std::uniform_real_distribution<double> uniform(-20.0, 20.0);
    const auto in = [](const ITPFISpec& s, double t) { return tset_membership(s, t).kind == TsetVerdict::Kind::In; };
    std::size_t zero_ok = 0, even_ok = 0, even = 0, closed_ok = 0, closed = 0;
    for (const auto& c : cases) {
      zero_ok += in(c.spec, 0.0) ? 1 : 0;
      for (int k = 0; k < 200; ++k) {
        const double t = k % 2 ? uniform(rng) : multiple(rng) * c.step;
        ++even;
        even_ok += in(c.spec, t) == in(c.spec, -t) ? 1 : 0;
      }
      for (int k = 0; k < 200; ++k) {
        const double t1 = multiple(rng) * c.step, t2 = multiple(rng) * c.step;
        ++closed;
        closed_ok += in(c.spec, t1) && in(c.spec, t2) && in(c.spec, t1 + t2) ? 1 : 0;
      }
    }
    r.ok = zero_ok == cases.size() && even_ok == even && closed_ok == closed;
    r.detail = "0 in T for " + detail::fmt_count(zero_ok, cases.size()) + " specs, evenness " +
               detail::fmt_count(even_ok, even) + ", In+In => In " + detail::fmt_count(closed_ok, closed);
  });
}

inline CriterionResult criterion_e0(const AcceptanceOptions&) {
  return detail::timed(12, "E0 fragment", 5, [&](CriterionResult& r) {
    const auto xs = all_eventually_periodic(3, 3);
    const std::size_t n = xs.size();
    std::vector<std::vector<char>> rel(n, std::vector<char>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) rel[i][j] = e0_equivalent(xs[i], xs[j]);
    std::size_t violations = 0;
    for (std::size_t i = 0; i < n; ++i) {
      violations += rel[i][i] ? 0 : 1;
      for (std::size_t j = 0; j < n; ++j) {
        violations += rel[i][j] == rel[j][i] ? 0 : 1;
        if (!rel[i][j]) continue;
        for (std::size_t k = 0; k < n; ++k) violations += rel[j][k] && !rel[i][k] ? 1 : 0;
      }
    }
    // same sequences re-encoded: doubled period, and one period symbol moved into the prefix
    std::size_t invariance = 0, changed = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& x = xs[i];
      const std::vector<EventuallyPeriodicBits> variants{
          {x.prefix, x.period + x.period},
          {x.prefix + x.period.substr(0, 1), x.period.substr(1) + x.period.substr(0, 1)}};
      for (const auto& v : variants)
        for (std::size_t j = 0; j < n; ++j) {
          ++invariance;
          changed += e0_equivalent(v, xs[j]) == static_cast<bool>(rel[i][j]) ? 0 : 1;
        }
    }
    r.ok = violations == 0 && changed == 0;
    r.detail = std::to_string(n) + " sequences, " + std::to_string(violations) + " axiom violations; " +
               std::to_string(changed) + "/" + std::to_string(invariance) + " re-encoded comparisons changed";
  });
}

inline CriterionResult criterion_char_support(const AcceptanceOptions& o) {
  return detail::timed(13, "character-support centralizer", 120, [&](CriterionResult& r) {
    const auto a5 = alternating_group(5);
    const auto z2 = cyclic_group(2);
    std::vector<std::string> parts;
    bool ok = true;
    for (const auto& g : {z2, a5, direct_product(a5, z2)}) {
      const auto rep = char_support_centralizer(g, o.caps);
      const auto brute = detail::brute_char_support_centralizer(g);
      const bool same = rep.centralizer == brute;
      ok = ok && same;
      parts.push_back(g.name() + ": |D| = " + std::to_string(rep.support_size) + ", |C(D)| = " +
                      std::to_string(rep.centralizer.size()) + (same ? " (matches)" : " (MISMATCH)"));
    }

    // A5 x (G(2 copies of P3) : Z2), too large to enumerate as a whole
    const auto graph = copies_graph(SimpleGraph::path(3), 2);
    const std::vector<VertexMap> perms{copy_permutation(3, {0, 1}), copy_permutation(3, {1, 0})};
    const MeklerSemidirect right(MeklerGroup(graph, 3), z2, perms);
    const auto structured = char_support_centralizer(a5, right, o.caps);

    // S = {(g, x_0) : g generates A5} + {(e, x_v)} + {(e, s)} lies in D (x_0 and s
    // are nontrivial under the abelian quotients a -> sum a_v and (g, h) -> h) and
    // generates the group, so C(D) = C(S), which splits over the two factors.
    std::vector<FinGroup::Element> left;
    const auto a5_gens = generating_set(a5, o.caps);
    for (FinGroup::Element x = 0; x < a5.order(); ++x) {
      bool commutes = true;
      for (auto g : a5_gens) commutes = commutes && a5.mul(x, g) == a5.mul(g, x);
      if (commutes) left.push_back(x);
    }
    const detail::SymmetricSemidirect sym(graph, 3, z2, perms);
    std::vector<detail::SymmetricSemidirect::Elem> tests;
    for (std::size_t v = 0; v < graph.size(); ++v) tests.push_back(sym.generator(v));
    tests.push_back(sym.acting_element(1));
    const auto right_c = sym.centralizer(tests);

    using Key = std::tuple<FinGroup::Element, std::uint64_t, FinGroup::Element>;
    std::vector<Key> expect, got;
    for (auto x : left)
      for (const auto& y : right_c) {
        const auto nf = sym.to_normal_form(y);
        expect.emplace_back(x, right.group().encode(nf.g), nf.h);
      }
    for (const auto& [x, y] : structured.centralizer) got.emplace_back(x, right.group().encode(y.g), y.h);
    std::sort(expect.begin(), expect.end());
    std::sort(got.begin(), got.end());
    const bool same = expect == got;
    ok = ok && same && !structured.perfect;
    parts.push_back("A5 x (G(2 P3) : Z2): |C(D)| = " + std::to_string(got.size()) + " structured, " +
                    std::to_string(expect.size()) + " brute force" + (same ? " (matches)" : " (MISMATCH)") +
                    "; the perfect factor contributes only its centre");
    r.ok = ok;
    for (std::size_t i = 0; i < parts.size(); ++i) r.detail += (i ? "; " : "") + parts[i];
  });
}

// ---------------------------------------------------------------- runner

inline AcceptanceReport run_acceptance(const AcceptanceOptions& options,
                                       const std::function<void(const CriterionResult&)>& on_result = {}) {
  using Runner = CriterionResult (*)(const AcceptanceOptions&);
  static constexpr Runner runners[] = {criterion_factor_law,   criterion_masa,          criterion_trace,
                                       criterion_feldman_moore, criterion_double_commutant, criterion_group_blocks,
                                       criterion_icc,          criterion_mekler_laws,   criterion_mekler_biconditional,
                                       criterion_powers_lattice, criterion_tset_subgroup, criterion_e0,
                                       criterion_char_support};
  constexpr int kCriteria = 14;
  const auto wanted = [&](int id) {
    return options.only.empty() || std::find(options.only.begin(), options.only.end(), id) != options.only.end();
  };
  AcceptanceReport report;
  for (int id = 1; id < kCriteria; ++id) {
    if (!wanted(id)) continue;
    report.results.push_back(runners[id - 1](options));
    if (on_result) on_result(report.results.back());
  }
  if (wanted(kCriteria)) {
    AcceptanceOptions again = options;
    again.only.clear();
    for (int id = 1; id < kCriteria; ++id)
      if (wanted(id)) again.only.push_back(id);
    if (again.only.empty())
      for (int id = 1; id < kCriteria; ++id) again.only.push_back(id);
    AcceptanceReport first = report;
    auto result = detail::timed(kCriteria, "determinism", 1800, [&](CriterionResult& r) {
      if (first.results.empty()) first = run_acceptance(again);
      const auto second = run_acceptance(again);
      r.ok = first.text() == second.text();
      r.detail = "two runs of " + std::to_string(second.results.size()) + " criteria with seed " +
                 std::to_string(options.seed) + (r.ok ? " give byte-identical reports" : " differ");
    });
    report.results.push_back(result);
    if (on_result) on_result(report.results.back());
  }
  return report;
}

}  // namespace vnlab
