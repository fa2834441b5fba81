#pragma once

// Mekler's class-2, exponent-p groups of graphs, with the isomorphism
// oracles and finite stand-ins used around them.
//
// Normal form: (a, b) with a indexed by vertices and b by non-edges {u, v},
// u < v. The product is (a + a', b + b' + chi(a, a')) where chi(a, a') has
// coordinate a_v * a'_u on the non-edge {u, v}. Then x_v x_u = x_u x_v c_uv
// for u < v non-adjacent, and x_1^a_1 ... x_n^a_n = (a, 0).

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vnlab/caps.hpp"
#include "vnlab/error.hpp"
#include "vnlab/fingroup.hpp"

namespace vnlab {

// ---------------------------------------------------------------- graphs

class SimpleGraph {
 public:
  static constexpr std::size_t kMaxVertices = 64;
  using Edge = std::pair<std::size_t, std::size_t>;

  explicit SimpleGraph(std::size_t n = 0) : adj_(n, 0) {
    if (n > kMaxVertices) throw CapExceeded("graph vertices", n, kMaxVertices);
  }

  static SimpleGraph from_edges(std::size_t n, const std::vector<Edge>& edges) {
    SimpleGraph g(n);
    for (const auto& [u, v] : edges) g.add_edge(u, v);
    return g;
  }

  void add_edge(std::size_t u, std::size_t v) {
    if (u >= size() || v >= size())
      throw InputError("edge {" + std::to_string(u) + "," + std::to_string(v) + "} out of range for " +
                       std::to_string(size()) + " vertices");
    if (u == v) throw InputError("self-loop at vertex " + std::to_string(u));
    adj_[u] |= bit(v);
    adj_[v] |= bit(u);
  }

  std::size_t size() const noexcept { return adj_.size(); }
  bool adjacent(std::size_t u, std::size_t v) const { return (adj_[u] >> v) & 1U; }
  std::uint64_t neighbours(std::size_t v) const { return adj_[v]; }
  std::size_t degree(std::size_t v) const { return static_cast<std::size_t>(__builtin_popcountll(adj_[v])); }

  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (std::size_t u = 0; u < size(); ++u)
      for (std::size_t v = u + 1; v < size(); ++v)
        if (adjacent(u, v)) out.emplace_back(u, v);
    return out;
  }
  std::vector<Edge> non_edges() const {
    std::vector<Edge> out;
    for (std::size_t u = 0; u < size(); ++u)
      for (std::size_t v = u + 1; v < size(); ++v)
        if (!adjacent(u, v)) out.emplace_back(u, v);
    return out;
  }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (auto m : adj_) e += static_cast<std::size_t>(__builtin_popcountll(m));
    return e / 2;
  }

  /// Image under the vertex map v -> perm[v].
  SimpleGraph relabel(const std::vector<std::size_t>& perm) const {
    if (perm.size() != size()) throw InputError("relabelling has the wrong length");
    SimpleGraph out(size());
    for (const auto& [u, v] : edges()) out.add_edge(perm[u], perm[v]);
    return out;
  }

  std::string str() const {
    std::string s = "n=" + std::to_string(size()) + " edges=[";
    bool first = true;
    for (const auto& [u, v] : edges()) {
      s += (first ? "" : ",") + std::to_string(u) + "-" + std::to_string(v);
      first = false;
    }
    return s + "]";
  }

  friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) { return a.adj_ == b.adj_; }
  friend bool operator<(const SimpleGraph& a, const SimpleGraph& b) { return a.adj_ < b.adj_; }

  static SimpleGraph path(std::size_t n) {
    SimpleGraph g(n);
    for (std::size_t i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
    return g;
  }
  static SimpleGraph cycle(std::size_t n) {
    if (n < 3) throw InputError("a cycle needs at least 3 vertices");
    SimpleGraph g = path(n);
    g.add_edge(n - 1, 0);
    return g;
  }
  static SimpleGraph complete(std::size_t n) {
    SimpleGraph g(n);
    for (std::size_t u = 0; u < n; ++u)
      for (std::size_t v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
  }
  /// K_{1,leaves} with centre 0.
  static SimpleGraph star(std::size_t leaves) {
    SimpleGraph g(leaves + 1);
    for (std::size_t v = 1; v <= leaves; ++v) g.add_edge(0, v);
    return g;
  }

 private:
  static std::uint64_t bit(std::size_t v) { return std::uint64_t{1} << v; }
  std::vector<std::uint64_t> adj_;
};

/// Every labelled graph on exactly n vertices, in edge-mask order.
inline std::vector<SimpleGraph> all_graphs(std::size_t n) {
  if (n > 6) throw CapExceeded("graph enumeration vertices", n, 6);
  std::vector<SimpleGraph::Edge> slots;
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  std::vector<SimpleGraph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
    SimpleGraph g(n);
    for (std::size_t i = 0; i < slots.size(); ++i)
      if ((mask >> i) & 1U) g.add_edge(slots[i].first, slots[i].second);
    out.push_back(std::move(g));
  }
  return out;
}

// ---------------------------------------------------------------- niceness

enum class NiceVariant {
  Literal,        // separating vertex w may be v itself
  StrictWitness,  // separating vertex w must differ from u and v
};

struct NiceReport {
  bool nice = false;
  std::vector<std::string> failed;  // one line per failing clause, with a witness
};

/// (i) at least 2 vertices; (ii) no triangle; (iii) no 4-cycle; (iv) for all
/// distinct u, v some w is adjacent to u and not to v.
inline NiceReport nice_report(const SimpleGraph& g, NiceVariant variant = NiceVariant::Literal) {
  NiceReport r;
  const std::size_t n = g.size();
  if (n < 2) r.failed.push_back("(i) fewer than 2 vertices");
  bool triangle = false, square = false;
  for (std::size_t u = 0; u < n && !triangle; ++u)
    for (std::size_t v = u + 1; v < n && !triangle; ++v) {
      if (!g.adjacent(u, v)) continue;
      const std::uint64_t common = g.neighbours(u) & g.neighbours(v);
      if (common) {
        const auto w = static_cast<std::size_t>(__builtin_ctzll(common));
        r.failed.push_back("(ii) triangle " + std::to_string(u) + "-" + std::to_string(v) + "-" + std::to_string(w));
        triangle = true;
      }
    }
  for (std::size_t u = 0; u < n && !square; ++u)
    for (std::size_t v = u + 1; v < n && !square; ++v) {
      const std::uint64_t common = g.neighbours(u) & g.neighbours(v);
      if (__builtin_popcountll(common) >= 2) {
        const auto w1 = static_cast<std::size_t>(__builtin_ctzll(common));
        const auto w2 = static_cast<std::size_t>(__builtin_ctzll(common & (common - 1)));
        r.failed.push_back("(iii) 4-cycle " + std::to_string(u) + "-" + std::to_string(w1) + "-" + std::to_string(v) +
                           "-" + std::to_string(w2));
        square = true;
      }
    }
  bool separated = true;
  for (std::size_t u = 0; u < n && separated; ++u)
    for (std::size_t v = 0; v < n && separated; ++v) {
      if (u == v) continue;
      std::uint64_t cand = g.neighbours(u) & ~g.neighbours(v);
      if (variant == NiceVariant::StrictWitness) cand &= ~(std::uint64_t{1} << v);
      if (!cand) {
        r.failed.push_back("(iv) no vertex adjacent to " + std::to_string(u) + " but not to " + std::to_string(v));
        separated = false;
      }
    }
  r.nice = r.failed.empty();
  return r;
}

inline bool is_nice(const SimpleGraph& g, NiceVariant variant = NiceVariant::Literal) {
  return nice_report(g, variant).nice;
}

// ---------------------------------------------------------------- graph isomorphism

using VertexMap = std::vector<std::size_t>;

inline bool is_graph_isomorphism(const VertexMap& phi, const SimpleGraph& a, const SimpleGraph& b) {
  if (a.size() != b.size() || phi.size() != a.size()) return false;
  std::vector<bool> hit(b.size(), false);
  for (auto x : phi) {
    if (x >= b.size() || hit[x]) return false;
    hit[x] = true;
  }
  for (std::size_t u = 0; u < a.size(); ++u)
    for (std::size_t v = u + 1; v < a.size(); ++v)
      if (a.adjacent(u, v) != b.adjacent(phi[u], phi[v])) return false;
  return true;
}

/// Exhaustive search for phi with u ~ v iff phi(u) ~ phi(v), degrees pruned.
inline std::optional<VertexMap> graph_iso(const SimpleGraph& a, const SimpleGraph& b) {
  constexpr std::size_t kMax = 8;
  check_cap("graph_iso vertices", std::max(a.size(), b.size()), kMax);
  const std::size_t n = a.size();
  if (n != b.size() || a.edge_count() != b.edge_count()) return std::nullopt;
  std::vector<std::size_t> da(n), db(n);
  for (std::size_t v = 0; v < n; ++v) {
    da[v] = a.degree(v);
    db[v] = b.degree(v);
  }
  auto sa = da, sb = db;
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  if (sa != sb) return std::nullopt;
  VertexMap phi(n);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> go = [&](std::size_t u) {
    if (u == n) return true;
    for (std::size_t x = 0; x < n; ++x) {
      if (used[x] || da[u] != db[x]) continue;
      bool ok = true;
      for (std::size_t w = 0; w < u && ok; ++w) ok = a.adjacent(u, w) == b.adjacent(x, phi[w]);
      if (!ok) continue;
      phi[u] = x;
      used[x] = true;
      if (go(u + 1)) return true;
      used[x] = false;
    }
    return false;
  };
  if (go(0)) return phi;
  return std::nullopt;
}

// ---------------------------------------------------------------- arithmetic mod p

namespace detail {

inline bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

inline std::uint32_t inverse_mod(std::uint32_t x, std::uint32_t p) {
  std::uint64_t r = 1, base = x % p;
  for (std::uint32_t e = p - 2; e; e >>= 1) {
    if (e & 1U) r = r * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(r);
}

using ModRow = std::vector<std::uint32_t>;

/// Row echelon form mod p in place; returns the pivot columns.
inline std::vector<std::size_t> echelon_mod(std::vector<ModRow>& rows, std::size_t cols, std::uint32_t p) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t sel = r;
    while (sel < rows.size() && rows[sel][c] == 0) ++sel;
    if (sel == rows.size()) continue;
    std::swap(rows[r], rows[sel]);
    const std::uint64_t inv = inverse_mod(rows[r][c], p);
    for (auto& x : rows[r]) x = static_cast<std::uint32_t>(x * inv % p);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (i == r || rows[i][c] == 0) continue;
      const std::uint64_t f = rows[i][c];
      for (std::size_t j = 0; j < rows[i].size(); ++j)
        rows[i][j] = static_cast<std::uint32_t>((rows[i][j] + (p - f) * rows[r][j]) % p);
    }
    pivots.push_back(c);
    ++r;
  }
  rows.resize(r);
  return pivots;
}

inline std::size_t rank_mod(std::vector<ModRow> rows, std::size_t cols, std::uint32_t p) {
  return echelon_mod(rows, cols, p).size();
}

struct AffineSolution {
  ModRow particular;
  std::vector<ModRow> kernel;
};

/// Solutions of A x = rhs mod p, or nothing when inconsistent.
inline std::optional<AffineSolution> solve_mod(const std::vector<ModRow>& a, const ModRow& rhs, std::size_t cols,
                                               std::uint32_t p) {
  std::vector<ModRow> aug;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ModRow row = a[i];
    row.push_back(rhs[i] % p);
    aug.push_back(std::move(row));
  }
  const auto pivots = echelon_mod(aug, cols + 1, p);
  if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
  AffineSolution s;
  s.particular.assign(cols, 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) s.particular[pivots[r]] = aug[r][cols];
  std::vector<bool> is_pivot(cols, false);
  for (auto c : pivots) is_pivot[c] = true;
  for (std::size_t f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    ModRow k(cols, 0);
    k[f] = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) k[pivots[r]] = (p - aug[r][f]) % p;
    s.kernel.push_back(std::move(k));
  }
  return s;
}

}  // namespace detail

// ---------------------------------------------------------------- Mekler groups

struct MeklerElement {
  std::vector<std::uint32_t> a;  // vertex part
  std::vector<std::uint32_t> b;  // non-edge part
  friend bool operator==(const MeklerElement&, const MeklerElement&) = default;
  friend auto operator<=>(const MeklerElement&, const MeklerElement&) = default;
};

class MeklerGroup {
 public:
  explicit MeklerGroup(SimpleGraph graph, std::uint32_t p = 3) : graph_(std::move(graph)), p_(p) {
    if (p < 3 || p > 65521 || !detail::is_prime(p)) throw InputError("p must be an odd prime below 2^16");
    non_edges_ = graph_.non_edges();
    index_.assign(n() * n(), -1);
    for (std::size_t i = 0; i < non_edges_.size(); ++i) {
      const auto [u, v] = non_edges_[i];
      index_[u * n() + v] = index_[v * n() + u] = static_cast<std::int64_t>(i);
    }
  }

  const SimpleGraph& graph() const noexcept { return graph_; }
  std::uint32_t p() const noexcept { return p_; }
  std::size_t n() const noexcept { return graph_.size(); }
  std::size_t m() const noexcept { return non_edges_.size(); }
  const std::vector<SimpleGraph::Edge>& non_edges() const noexcept { return non_edges_; }
  /// Index of the non-edge {u, v}, or -1 for an edge or u == v.
  std::int64_t non_edge_index(std::size_t u, std::size_t v) const { return index_[u * n() + v]; }

  /// |G| = p^(n + #non-edges).
  std::size_t order_exponent() const noexcept { return n() + m(); }

  MeklerElement identity() const { return {std::vector<std::uint32_t>(n(), 0), std::vector<std::uint32_t>(m(), 0)}; }
  MeklerElement generator(std::size_t v) const {
    auto e = identity();
    e.a.at(v) = 1;
    return e;
  }
  /// c_uv = [x_v, x_u] for u < v non-adjacent.
  MeklerElement central_generator(std::size_t i) const {
    auto e = identity();
    e.b.at(i) = 1;
    return e;
  }

  void check(const MeklerElement& x) const {
    if (x.a.size() != n() || x.b.size() != m())
      throw InputError("element has shape (" + std::to_string(x.a.size()) + "," + std::to_string(x.b.size()) +
                       "), group expects (" + std::to_string(n()) + "," + std::to_string(m()) + ")");
    for (auto c : x.a)
      if (c >= p_) throw InputError("element coordinate out of range");
    for (auto c : x.b)
      if (c >= p_) throw InputError("element coordinate out of range");
  }

  /// chi(a, a') on the non-edge {u, v}, u < v: a_v a'_u.
  std::vector<std::uint32_t> chi(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& a2) const {
    std::vector<std::uint32_t> out(m());
    for (std::size_t i = 0; i < m(); ++i) {
      const auto [u, v] = non_edges_[i];
      out[i] = static_cast<std::uint32_t>(std::uint64_t{a[v]} * a2[u] % p_);
    }
    return out;
  }

  MeklerElement mul(const MeklerElement& x, const MeklerElement& y) const {
    check(x);
    check(y);
    MeklerElement z;
    z.a.resize(n());
    z.b.resize(m());
    for (std::size_t i = 0; i < n(); ++i) z.a[i] = (x.a[i] + y.a[i]) % p_;
    const auto c = chi(x.a, y.a);
    for (std::size_t i = 0; i < m(); ++i) z.b[i] = static_cast<std::uint32_t>((std::uint64_t{x.b[i]} + y.b[i] + c[i]) % p_);
    return z;
  }

  /// (-a, -b + chi(a, a)).
  MeklerElement inv(const MeklerElement& x) const {
    check(x);
    MeklerElement z;
    z.a.resize(n());
    z.b.resize(m());
    for (std::size_t i = 0; i < n(); ++i) z.a[i] = (p_ - x.a[i]) % p_;
    const auto c = chi(x.a, x.a);
    for (std::size_t i = 0; i < m(); ++i) z.b[i] = (p_ - x.b[i] + c[i]) % p_;
    return z;
  }

  MeklerElement pow(const MeklerElement& x, std::uint64_t k) const {
    MeklerElement r = identity();
    for (std::uint64_t i = 0; i < k % p_; ++i) r = mul(r, x);
    return r;
  }
  MeklerElement commutator(const MeklerElement& x, const MeklerElement& y) const {
    return mul(mul(x, y), mul(inv(x), inv(y)));
  }

  /// Base-p digits of a then b; needs p^(n+m) < 2^63.
  std::uint64_t encode(const MeklerElement& x) const {
    std::uint64_t code = 0;
    for (std::size_t i = m(); i-- > 0;) code = code * p_ + x.b[i];
    for (std::size_t i = n(); i-- > 0;) code = code * p_ + x.a[i];
    return code;
  }
  MeklerElement decode(std::uint64_t code) const {
    MeklerElement x = identity();
    for (std::size_t i = 0; i < n(); ++i, code /= p_) x.a[i] = static_cast<std::uint32_t>(code % p_);
    for (std::size_t i = 0; i < m(); ++i, code /= p_) x.b[i] = static_cast<std::uint32_t>(code % p_);
    return x;
  }

  std::uint64_t order() const {
    std::uint64_t o = 1;
    for (std::size_t i = 0; i < order_exponent(); ++i) {
      if (o > (std::uint64_t{1} << 62) / p_) throw CapExceeded("Mekler group order (64-bit encoding)", UINT64_MAX, UINT64_MAX);
      o *= p_;
    }
    return o;
  }

  std::string format(const MeklerElement& x) const {
    std::string s = "(";
    for (std::size_t i = 0; i < n(); ++i) s += std::to_string(x.a[i]);
    s += "|";
    for (std::size_t i = 0; i < m(); ++i) s += std::to_string(x.b[i]);
    return s + ")";
  }

  /// Oracle-backed FinGroup on the encoded normal forms, generated by the x_v.
  FinGroup to_fin_group(std::string name = {}) const {
    const auto ord = order();
    auto self = std::make_shared<const MeklerGroup>(*this);
    FinGroup::Oracle o{[self](FinGroup::Element x, FinGroup::Element y) {
                         return self->encode(self->mul(self->decode(x), self->decode(y)));
                       },
                       [self](FinGroup::Element x) { return self->encode(self->inv(self->decode(x))); },
                       [self](FinGroup::Element x) { return self->format(self->decode(x)); }};
    std::vector<FinGroup::Element> gens;
    for (std::size_t v = 0; v < n(); ++v) gens.push_back(encode(generator(v)));
    if (name.empty()) name = "G(" + graph_.str() + ",p=" + std::to_string(p_) + ")";
    return FinGroup(std::move(name), ord, 0, std::move(o), std::move(gens));
  }

 private:
  SimpleGraph graph_;
  std::uint32_t p_;
  std::vector<SimpleGraph::Edge> non_edges_;
  std::vector<std::int64_t> index_;
};

// ---------------------------------------------------------------- homomorphisms

/// Homomorphism determined by images of the x_v: (a, b) goes to
/// f(x_1)^a_1 ... f(x_n)^a_n times prod f(c_uv)^b_uv, f(c_uv) = [f(x_v), f(x_u)].
class MeklerMap {
 public:
  MeklerMap(MeklerGroup source, MeklerGroup target, std::vector<MeklerElement> images)
      : source_(std::move(source)), target_(std::move(target)), images_(std::move(images)) {
    if (source_.p() != target_.p()) throw InputError("groups use different primes");
    if (images_.size() != source_.n()) throw InputError("need one image per vertex");
    for (const auto& x : images_) target_.check(x);
    for (std::size_t i = 0; i < source_.m(); ++i) {
      const auto [u, v] = source_.non_edges()[i];
      central_.push_back(target_.commutator(images_[v], images_[u]));
    }
  }

  const MeklerGroup& source() const noexcept { return source_; }
  const MeklerGroup& target() const noexcept { return target_; }

  MeklerElement operator()(const MeklerElement& x) const {
    source_.check(x);
    MeklerElement r = target_.identity();
    for (std::size_t v = 0; v < source_.n(); ++v)
      if (x.a[v]) r = target_.mul(r, target_.pow(images_[v], x.a[v]));
    for (std::size_t i = 0; i < source_.m(); ++i)
      if (x.b[i]) r = target_.mul(r, target_.pow(central_[i], x.b[i]));
    return r;
  }

  /// Matrix of the induced map on the non-edge coordinates (column i is the
  /// image of c_i); valid when every central image lies in the centre.
  std::vector<detail::ModRow> central_matrix() const {
    std::vector<detail::ModRow> out(target_.m(), detail::ModRow(source_.m(), 0));
    for (std::size_t i = 0; i < source_.m(); ++i)
      for (std::size_t j = 0; j < target_.m(); ++j) out[j][i] = central_[i].b[j];
    return out;
  }

  /// Bijective iff the vertex-part matrix and the central matrix are invertible
  /// (and the central images have zero vertex part).
  bool is_bijective() const {
    if (source_.n() != target_.n() || source_.m() != target_.m()) return false;
    for (const auto& c : central_)
      if (std::any_of(c.a.begin(), c.a.end(), [](auto x) { return x != 0; })) return false;
    std::vector<detail::ModRow> lin(target_.n(), detail::ModRow(source_.n(), 0));
    for (std::size_t v = 0; v < source_.n(); ++v)
      for (std::size_t w = 0; w < target_.n(); ++w) lin[w][v] = images_[v].a[w];
    return detail::rank_mod(lin, source_.n(), source_.p()) == source_.n() &&
           detail::rank_mod(central_matrix(), source_.m(), source_.p()) == source_.m();
  }

  /// Checks f(xy) = f(x) f(y): exhaustively when |G|^2 <= samples, otherwise
  /// on `samples` seeded random pairs. Returns the first failing pair.
  std::optional<std::pair<MeklerElement, MeklerElement>> find_product_failure(std::size_t samples = 10000,
                                                                               std::uint64_t seed = 1) const {
    const auto check_pair = [&](const MeklerElement& x, const MeklerElement& y) {
      return (*this)(source_.mul(x, y)) == target_.mul((*this)(x), (*this)(y));
    };
    std::uint64_t ord = 0;
    try {
      ord = source_.order();
    } catch (const CapExceeded&) {
      ord = UINT64_MAX;
    }
    if (ord <= 1000000 && ord * ord <= samples) {
      for (std::uint64_t i = 0; i < ord; ++i)
        for (std::uint64_t j = 0; j < ord; ++j) {
          const auto x = source_.decode(i), y = source_.decode(j);
          if (!check_pair(x, y)) return std::make_pair(x, y);
        }
      return std::nullopt;
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::uint32_t> digit(0, source_.p() - 1);
    const auto random = [&] {
      auto x = source_.identity();
      for (auto& c : x.a) c = digit(rng);
      for (auto& c : x.b) c = digit(rng);
      return x;
    };
    for (std::size_t t = 0; t < samples; ++t) {
      const auto x = random(), y = random();
      if (!check_pair(x, y)) return std::make_pair(x, y);
    }
    return std::nullopt;
  }

 private:
  MeklerGroup source_, target_;
  std::vector<MeklerElement> images_;
  std::vector<MeklerElement> central_;
};

/// The isomorphism G(A) -> G(B) sending x_v to x_phi(v), verified to be a
/// bijective homomorphism.
inline MeklerMap induced_group_iso(const VertexMap& phi, const MeklerGroup& a, const MeklerGroup& b,
                                   std::size_t samples = 10000, std::uint64_t seed = 1) {
  if (!is_graph_isomorphism(phi, a.graph(), b.graph())) throw InputError("vertex map is not a graph isomorphism");
  std::vector<MeklerElement> images;
  for (std::size_t v = 0; v < a.n(); ++v) images.push_back(b.generator(phi[v]));
  MeklerMap f(a, b, std::move(images));
  if (!f.is_bijective()) throw ConsistencyFailure("induced map is not bijective");
  if (auto bad = f.find_product_failure(samples, seed))
    throw ConsistencyFailure("induced map fails f(xy)=f(x)f(y) at " + a.format(bad->first) + ", " +
                             a.format(bad->second));
  return f;
}

// ---------------------------------------------------------------- fingerprints

struct GroupFingerprint {
  std::size_t order_exp = 0;
  std::size_t center_order_exp = 0;
  std::size_t abelianization_exp = 0;
  std::map<std::size_t, std::uint64_t> rank_counts;  // rank -> #{a in F_p^n}

  friend bool operator==(const GroupFingerprint&, const GroupFingerprint&) = default;

  std::string str() const {
    std::string s = "order=p^" + std::to_string(order_exp) + " center=p^" + std::to_string(center_order_exp) +
                    " ab=p^" + std::to_string(abelianization_exp) + " ranks={";
    bool first = true;
    for (const auto& [r, c] : rank_counts) {
      s += (first ? "" : ",") + std::to_string(r) + ":" + std::to_string(c);
      first = false;
    }
    return s + "}";
  }
};

/// Rank of a' -> chi(a, a') - chi(a', a): on {u, v} the row a_v e_u - a_u e_v.
inline std::size_t commutator_rank(const MeklerGroup& g, const std::vector<std::uint32_t>& a) {
  std::vector<detail::ModRow> rows;
  const auto p = g.p();
  for (const auto& [u, v] : g.non_edges()) {
    if (a[u] == 0 && a[v] == 0) continue;
    detail::ModRow row(g.n(), 0);
    row[u] = a[v];
    row[v] = (p - a[u]) % p;
    rows.push_back(std::move(row));
  }
  return detail::rank_mod(std::move(rows), g.n(), p);
}

inline GroupFingerprint fingerprint(const MeklerGroup& g) {
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < g.n(); ++i) {
    count *= g.p();
    check_cap("fingerprint p^n", count, 531441);
  }
  GroupFingerprint f;
  f.order_exp = g.order_exponent();
  f.abelianization_exp = g.n();
  std::vector<std::uint32_t> a(g.n(), 0);
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    for (auto& x : a) {
      x = static_cast<std::uint32_t>(c % g.p());
      c /= g.p();
    }
    ++f.rank_counts[commutator_rank(g, a)];
  }
  std::size_t radical = 0;
  for (std::uint64_t k = f.rank_counts[0]; k > 1; k /= g.p()) ++radical;
  f.center_order_exp = radical + g.m();
  return f;
}

// ---------------------------------------------------------------- exact isomorphism

struct ExactIsoResult {
  bool isomorphic = false;
  std::vector<std::vector<std::uint32_t>> witness;  // images of the basis vectors
  std::uint64_t nodes = 0;                          // search nodes visited
};

#ifdef VNLAB_FULL_GL_SEARCH
inline constexpr std::size_t kExactIsoMaxVertices = 4;
#else
inline constexpr std::size_t kExactIsoMaxVertices = 3;
#endif

/// G(A) ~ G(B) iff some S in GL(n, p) maps the edge span {u^v : u ~ v} of A
/// onto that of B. Searches S column by column; the image s_u ^ s_v of each
/// edge must vanish on every non-edge coordinate of B.
inline ExactIsoResult exact_iso(const SimpleGraph& a, const SimpleGraph& b, std::uint32_t p = 3) {
  if (p < 3 || !detail::is_prime(p)) throw InputError("p must be an odd prime");
  check_cap("exact_iso vertices", std::max(a.size(), b.size()), kExactIsoMaxVertices);
  ExactIsoResult r;
  const std::size_t n = a.size();
  if (n != b.size() || a.edge_count() != b.edge_count()) return r;
  std::uint64_t count = 1;
  for (std::size_t i = 0; i < n; ++i) count *= p;
  std::vector<std::vector<std::uint32_t>> vecs(count, std::vector<std::uint32_t>(n));
  for (std::uint64_t code = 0; code < count; ++code) {
    std::uint64_t c = code;
    for (auto& x : vecs[code]) {
      x = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
  }
  const auto b_non_edges = b.non_edges();
  const auto wedge_ok = [&](const std::vector<std::uint32_t>& s, const std::vector<std::uint32_t>& t) {
    for (const auto& [x, y] : b_non_edges)
      if ((std::uint64_t{s[x]} * t[y] + std::uint64_t{p - s[y]} * t[x]) % p != 0) return false;
    return true;
  };
  // vertices of A in decreasing degree, so edge constraints bite early
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return a.degree(x) > a.degree(y); });
  std::vector<std::uint64_t> chosen(n, 0);
  std::vector<detail::ModRow> basis;
  std::function<bool(std::size_t)> go = [&](std::size_t k) {
    if (k == n) return true;
    const std::size_t u = order[k];
    for (std::uint64_t code = 1; code < count; ++code) {
      ++r.nodes;
      const auto& s = vecs[code];
      bool ok = true;
      for (std::size_t j = 0; j < k && ok; ++j)
        if (a.adjacent(u, order[j])) ok = wedge_ok(s, vecs[chosen[order[j]]]);
      if (!ok) continue;
      auto rows = basis;
      rows.push_back(s);
      if (detail::rank_mod(rows, n, p) != k + 1) continue;
      chosen[u] = code;
      basis.push_back(s);
      if (go(k + 1)) return true;
      basis.pop_back();
    }
    return false;
  };
  if (n == 0 || go(0)) {
    r.isomorphic = true;
    for (std::size_t v = 0; v < n; ++v) r.witness.push_back(vecs[chosen[v]]);
  }
  return r;
}

// ---------------------------------------------------------------- copies and semidirect products

/// k disjoint copies; vertex (copy c, v) has index c*n + v.
inline SimpleGraph copies_graph(const SimpleGraph& g, std::size_t k) {
  if (k == 0) throw InputError("need at least one copy");
  check_cap("copies graph vertices", k * g.size(), SimpleGraph::kMaxVertices);
  SimpleGraph out(k * g.size());
  for (std::size_t c = 0; c < k; ++c)
    for (const auto& [u, v] : g.edges()) out.add_edge(c * g.size() + u, c * g.size() + v);
  return out;
}

/// Vertex map of copies_graph(g, k) permuting whole copies.
inline VertexMap copy_permutation(std::size_t n, const std::vector<std::size_t>& copy_perm) {
  VertexMap out(n * copy_perm.size());
  for (std::size_t c = 0; c < copy_perm.size(); ++c)
    for (std::size_t v = 0; v < n; ++v) out[c * n + v] = copy_perm[c] * n + v;
  return out;
}

/// Checks that `perms[h]` are graph automorphisms forming a homomorphism H -> Aut.
inline void validate_vertex_action(const SimpleGraph& g, const FinGroup& h, const std::vector<VertexMap>& perms) {
  if (perms.size() != h.order()) throw InputError("need one vertex permutation per element of H");
  for (FinGroup::Element x = 0; x < h.order(); ++x)
    if (!is_graph_isomorphism(perms[x], g, g))
      throw HomomorphismFailure("vertex map of " + h.label(x) + " is not a graph automorphism");
  for (FinGroup::Element x = 0; x < h.order(); ++x)
    for (FinGroup::Element y = 0; y < h.order(); ++y) {
      const auto& pxy = perms[h.mul(x, y)];
      for (std::size_t v = 0; v < g.size(); ++v)
        if (pxy[v] != perms[x][perms[y][v]])
          throw HomomorphismFailure("vertex action is not a homomorphism at (" + h.label(x) + ", " + h.label(y) + ")");
    }
}

/// G(graph) semidirect H, H acting through graph automorphisms.
inline FinGroup semidirect_with(const MeklerGroup& g, const FinGroup& h, const std::vector<VertexMap>& perms,
                                const Caps& caps = {}) {
  validate_vertex_action(g.graph(), h, perms);
  const std::uint64_t ord = g.order();
  check_cap("semidirect product order", ord * h.order(), caps.semidirect);
  std::vector<MeklerMap> maps;
  for (FinGroup::Element x = 0; x < h.order(); ++x) maps.push_back(induced_group_iso(perms[x], g, g, 1000, x + 1));
  auto shared = std::make_shared<const std::vector<MeklerMap>>(std::move(maps));
  auto self = std::make_shared<const MeklerGroup>(g);
  return semidirect_product(g.to_fin_group(), h, [shared, self](FinGroup::Element k, FinGroup::Element x) {
    return self->encode((*shared)[k](self->decode(x)));
  });
}

inline FinGroup semidirect_with(const FinGroup& g, const FinGroup& h,
                                std::function<FinGroup::Element(FinGroup::Element, FinGroup::Element)> act,
                                const Caps& caps = {}) {
  check_cap("semidirect product order", g.order() * h.order(), caps.semidirect);
  return semidirect_product(g, h, std::move(act));
}

/// G(graph) semidirect H kept in normal form, for orders beyond enumeration.
class MeklerSemidirect {
 public:
  struct Element {
    MeklerElement g;
    FinGroup::Element h = 0;
    friend bool operator==(const Element&, const Element&) = default;
    friend auto operator<=>(const Element&, const Element&) = default;
  };

  MeklerSemidirect(MeklerGroup group, FinGroup acting, std::vector<VertexMap> perms)
      : group_(std::move(group)), acting_(std::move(acting)), perms_(std::move(perms)) {
    validate_vertex_action(group_.graph(), acting_, perms_);
    for (FinGroup::Element x = 0; x < acting_.order(); ++x) {
      std::vector<MeklerElement> images;
      for (std::size_t v = 0; v < group_.n(); ++v) images.push_back(group_.generator(perms_[x][v]));
      maps_.emplace_back(group_, group_, std::move(images));
      if (!maps_.back().is_bijective()) throw HomomorphismFailure("vertex action does not induce an automorphism");
    }
  }

  const MeklerGroup& group() const noexcept { return group_; }
  const FinGroup& acting() const noexcept { return acting_; }
  const std::vector<VertexMap>& perms() const noexcept { return perms_; }
  const MeklerMap& automorphism(FinGroup::Element h) const { return maps_.at(h); }

  Element mul(const Element& x, const Element& y) const {
    return {group_.mul(x.g, maps_[x.h](y.g)), acting_.mul(x.h, y.h)};
  }
  Element inv(const Element& x) const {
    const auto hi = acting_.inv(x.h);
    return {maps_[hi](group_.inv(x.g)), hi};
  }
  std::string format(const Element& x) const { return "(" + group_.format(x.g) + ";" + acting_.label(x.h) + ")"; }
  std::string name() const { return "G(" + group_.graph().str() + "):" + acting_.name(); }

 private:
  MeklerGroup group_;
  FinGroup acting_;
  std::vector<VertexMap> perms_;
  std::vector<MeklerMap> maps_;
};

// ---------------------------------------------------------------- character-support centralizer

/// Enumerable form. D = {g : some linear character has chi(g) != 1}, which
/// for a finite group is the complement of the commutator subgroup; the
/// result is the brute-force centralizer of D.
struct CharSupportReport {
  bool perfect = false;
  std::uint64_t order = 0;
  std::uint64_t commutator_order = 0;
  std::uint64_t support_size = 0;
  std::vector<FinGroup::Element> centralizer;
};

inline CharSupportReport char_support_centralizer(const FinGroup& g, const Caps& caps = {}) {
  check_cap("char_support_centralizer order", g.order(), caps.group_enumeration);
  CharSupportReport r;
  r.order = g.order();
  const auto derived = derived_subgroup(g, caps);
  r.commutator_order = derived.size();
  r.perfect = derived.size() == g.order();
  std::vector<bool> in_derived(g.order(), false);
  for (auto x : derived) in_derived[x] = true;
  std::vector<FinGroup::Element> support;
  for (FinGroup::Element x = 0; x < g.order(); ++x)
    if (!in_derived[x]) support.push_back(x);
  r.support_size = support.size();
  r.centralizer = centralizer(g, support, caps);
  return r;
}

/// Structured form for left x (G(graph) : H), beyond enumeration. Since D is
/// the complement of a proper subgroup here, it generates the group and its
/// centralizer is the centre Z(left) x Z(right), with Z(right) =
/// {(g, h) : g in Z(G(graph)) fixed by H, h central in H and acting trivially}.
struct StructuredCharSupport {
  bool perfect = false;
  std::uint64_t left_commutator_order = 0;
  std::vector<std::pair<FinGroup::Element, MeklerSemidirect::Element>> centralizer;
};

inline std::vector<MeklerSemidirect::Element> semidirect_center(const MeklerSemidirect& s, const Caps& caps = {}) {
  const auto& g = s.group();
  const auto p = g.p();
  // radical: vertices in no non-edge are free, the rest vanish
  std::vector<bool> free_vertex(g.n(), true);
  for (const auto& [u, v] : g.non_edges()) free_vertex[u] = free_vertex[v] = false;
  std::vector<std::size_t> free_list;
  for (std::size_t v = 0; v < g.n(); ++v)
    if (free_vertex[v]) free_list.push_back(v);
  const auto h_gens = generating_set(s.acting(), caps);
  std::vector<MeklerSemidirect::Element> out;
  std::vector<FinGroup::Element> h_part;
  for (FinGroup::Element h = 0; h < s.acting().order(); ++h) {
    bool trivial = true;
    for (std::size_t v = 0; v < g.n() && trivial; ++v) trivial = s.perms()[h][v] == v;
    if (!trivial) continue;
    bool central = true;
    for (auto k : h_gens) central = central && s.acting().mul(h, k) == s.acting().mul(k, h);
    if (central) h_part.push_back(h);
  }
  std::uint64_t free_count = 1;
  for (std::size_t i = 0; i < free_list.size(); ++i) {
    free_count *= p;
    check_cap("centre enumeration", free_count, caps.group_enumeration);
  }
  for (std::uint64_t code = 0; code < free_count; ++code) {
    auto a = std::vector<std::uint32_t>(g.n(), 0);
    std::uint64_t c = code;
    for (auto v : free_list) {
      a[v] = static_cast<std::uint32_t>(c % p);
      c /= p;
    }
    // fixed by every generator of H: pi a = a and (M_h - 1) b = -q_h(a)
    bool fixed = true;
    std::vector<detail::ModRow> rows;
    detail::ModRow rhs;
    for (auto h : h_gens) {
      const auto& f = s.automorphism(h);
      const auto image = f(MeklerElement{a, std::vector<std::uint32_t>(g.m(), 0)});
      if (image.a != a) {
        fixed = false;
        break;
      }
      auto m = f.central_matrix();
      for (std::size_t i = 0; i < g.m(); ++i) {
        m[i][i] = (m[i][i] + p - 1) % p;
        rows.push_back(m[i]);
        rhs.push_back((p - image.b[i]) % p);
      }
    }
    if (!fixed) continue;
    const auto sol = detail::solve_mod(rows, rhs, g.m(), p);
    if (!sol) continue;
    std::uint64_t kernel_count = 1;
    for (std::size_t i = 0; i < sol->kernel.size(); ++i) {
      kernel_count *= p;
      check_cap("centre enumeration", kernel_count * free_count, caps.group_enumeration);
    }
    for (std::uint64_t kc = 0; kc < kernel_count; ++kc) {
      auto b = sol->particular;
      std::uint64_t c2 = kc;
      for (const auto& k : sol->kernel) {
        const auto coef = c2 % p;
        c2 /= p;
        for (std::size_t i = 0; i < b.size(); ++i) b[i] = static_cast<std::uint32_t>((b[i] + coef * k[i]) % p);
      }
      for (auto h : h_part) out.push_back({MeklerElement{a, b}, h});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline StructuredCharSupport char_support_centralizer(const FinGroup& left, const MeklerSemidirect& right,
                                                      const Caps& caps = {}) {
  if (right.group().n() == 0) throw InputError("the Mekler factor needs at least one vertex");
  StructuredCharSupport r;
  r.left_commutator_order = derived_subgroup(left, caps).size();
  // a -> sum of a_v is a nontrivial character of the right factor
  r.perfect = false;
  const auto left_center = centralizer(left, generating_set(left, caps), caps);
  const auto right_center = semidirect_center(right, caps);
  for (auto x : left_center)
    for (const auto& y : right_center) r.centralizer.emplace_back(x, y);
  return r;
}

}  // namespace vnlab
