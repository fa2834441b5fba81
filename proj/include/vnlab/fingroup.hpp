#pragma once

// Finite groups with elements encoded as integers 0..order-1.
//
// A FinGroup is either table-backed (small groups given by a Cayley table)
// or oracle-backed: multiplication is a function on encoded elements, which
// lets semidirect products and Mekler groups far beyond enumeration size
// share the same interface.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vnlab/caps.hpp"
#include "vnlab/error.hpp"

namespace vnlab {

class FinGroup {
 public:
  using Element = std::uint64_t;

  struct Oracle {
    std::function<Element(Element, Element)> mul;
    std::function<Element(Element)> inv;
    std::function<std::string(Element)> label;
  };

  FinGroup(std::string name, std::uint64_t order, Element identity, Oracle oracle, std::vector<Element> generators = {})
      : state_(std::make_shared<State>(State{std::move(name), order, identity, std::move(oracle), std::move(generators)})) {
    if (order == 0) throw InputError("group order must be positive");
    if (identity >= order) throw InputError("identity index out of range");
  }

  const std::string& name() const noexcept { return state_->name; }
  std::uint64_t order() const noexcept { return state_->order; }
  Element identity() const noexcept { return state_->identity; }
  Element mul(Element a, Element b) const { return state_->oracle.mul(a, b); }
  Element inv(Element a) const { return state_->oracle.inv(a); }
  std::string label(Element a) const { return state_->oracle.label(a); }

  /// Generating set supplied at construction; may be empty.
  const std::vector<Element>& declared_generators() const noexcept { return state_->generators; }

  Element conj(Element h, Element g) const { return mul(mul(h, g), inv(h)); }
  Element commutator(Element a, Element b) const { return mul(mul(a, b), mul(inv(a), inv(b))); }
  Element pow(Element a, std::uint64_t k) const {
    Element r = identity();
    for (std::uint64_t i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }

  /// Cayley table constructor; the table is validated (closure, identity,
  /// inverses; associativity exhaustively up to order 64, sampled above).
  static FinGroup from_table(std::string name, std::vector<std::string> labels,
                             const std::vector<std::vector<std::size_t>>& table);

 private:
  struct State {
    std::string name;
    std::uint64_t order;
    Element identity;
    Oracle oracle;
    std::vector<Element> generators;
  };
  std::shared_ptr<const State> state_;
};

/// All elements 0..order-1; the order must be within the enumeration cap.
inline std::vector<FinGroup::Element> elements(const FinGroup& g, const Caps& caps = {}) {
  check_cap("group enumeration", g.order(), caps.group_enumeration);
  std::vector<FinGroup::Element> out(g.order());
  std::iota(out.begin(), out.end(), FinGroup::Element{0});
  return out;
}

/// Checks identity, inverse and associativity laws. Exhaustive associativity
/// up to order 64, otherwise `samples` random triples.
inline void validate_group(const FinGroup& g, std::uint64_t seed = 1, std::size_t samples = 10000) {
  using E = FinGroup::Element;
  const std::uint64_t n = g.order();
  const auto fail = [&](const std::string& what) { throw InputError("group '" + g.name() + "': " + what); };
  const auto check_triple = [&](E a, E b, E c) {
    if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c)))
      fail("associativity fails at (" + g.label(a) + ", " + g.label(b) + ", " + g.label(c) + ")");
  };
  const bool exhaustive_elems = n <= 100000;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<E> pick(0, n - 1);
  const std::size_t elem_checks = exhaustive_elems ? static_cast<std::size_t>(n) : samples;
  for (std::size_t i = 0; i < elem_checks; ++i) {
    const E a = exhaustive_elems ? static_cast<E>(i) : pick(rng);
    const E ai = g.inv(a);
    if (ai >= n) fail("inverse out of range");
    if (g.mul(a, g.identity()) != a || g.mul(g.identity(), a) != a) fail("identity law fails at " + g.label(a));
    if (g.mul(a, ai) != g.identity() || g.mul(ai, a) != g.identity()) fail("inverse law fails at " + g.label(a));
  }
  if (n <= 64) {
    for (E a = 0; a < n; ++a)
      for (E b = 0; b < n; ++b)
        for (E c = 0; c < n; ++c) check_triple(a, b, c);
  } else {
    for (std::size_t i = 0; i < samples; ++i) check_triple(pick(rng), pick(rng), pick(rng));
  }
}

inline FinGroup FinGroup::from_table(std::string name, std::vector<std::string> labels,
                                     const std::vector<std::vector<std::size_t>>& table) {
  const std::size_t n = labels.size();
  if (n == 0) throw InputError("group table is empty");
  if (table.size() != n) throw InputError("group table has " + std::to_string(table.size()) + " rows for " + std::to_string(n) + " elements");
  auto flat = std::make_shared<std::vector<std::uint32_t>>(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (table[i].size() != n) throw InputError("group table row " + std::to_string(i) + " has the wrong length");
    for (std::size_t j = 0; j < n; ++j) {
      if (table[i][j] >= n) throw InputError("group table entry out of range at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      (*flat)[i * n + j] = static_cast<std::uint32_t>(table[i][j]);
    }
  }
  std::optional<std::size_t> identity;
  for (std::size_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (std::size_t x = 0; x < n && ok; ++x) ok = (*flat)[e * n + x] == x && (*flat)[x * n + e] == x;
    if (ok) identity = e;
  }
  if (!identity) throw InputError("group table has no identity element");
  auto inverse = std::make_shared<std::vector<std::uint32_t>>(n);
  for (std::size_t x = 0; x < n; ++x) {
    bool found = false;
    for (std::size_t y = 0; y < n && !found; ++y)
      if ((*flat)[x * n + y] == *identity) {
        (*inverse)[x] = static_cast<std::uint32_t>(y);
        found = true;
      }
    if (!found) throw InputError("element '" + labels[x] + "' has no inverse");
  }
  auto names = std::make_shared<std::vector<std::string>>(std::move(labels));
  Oracle oracle{[flat, n](Element a, Element b) -> Element { return (*flat)[a * n + b]; },
                [inverse](Element a) -> Element { return (*inverse)[a]; },
                [names](Element a) { return (*names)[a]; }};
  FinGroup g(std::move(name), n, *identity, std::move(oracle));
  validate_group(g);
  return g;
}

// ---------------------------------------------------------------------------
// Builders

inline FinGroup cyclic_group(std::uint64_t n) {
  if (n == 0) throw InputError("cyclic group order must be positive");
  FinGroup::Oracle o{[n](FinGroup::Element a, FinGroup::Element b) { return (a + b) % n; },
                     [n](FinGroup::Element a) { return (n - a) % n; },
                     [](FinGroup::Element a) { return std::to_string(a); }};
  std::vector<FinGroup::Element> gens;
  if (n > 1) gens.push_back(1);
  return FinGroup("Z" + std::to_string(n), n, 0, std::move(o), std::move(gens));
}

inline FinGroup trivial_group() { return cyclic_group(1); }

/// G x H with element g + |G| * h.
inline FinGroup direct_product(const FinGroup& g, const FinGroup& h) {
  const std::uint64_t ng = g.order();
  if (h.order() > UINT64_MAX / ng) throw CapExceeded("direct product order", UINT64_MAX, UINT64_MAX);
  FinGroup::Oracle o{
      [g, h, ng](FinGroup::Element a, FinGroup::Element b) {
        return g.mul(a % ng, b % ng) + ng * h.mul(a / ng, b / ng);
      },
      [g, h, ng](FinGroup::Element a) { return g.inv(a % ng) + ng * h.inv(a / ng); },
      [g, h, ng](FinGroup::Element a) { return "(" + g.label(a % ng) + "," + h.label(a / ng) + ")"; }};
  std::vector<FinGroup::Element> gens;
  for (auto x : g.declared_generators()) gens.push_back(x + ng * h.identity());
  for (auto y : h.declared_generators()) gens.push_back(g.identity() + ng * y);
  return FinGroup(g.name() + "x" + h.name(), ng * h.order(), g.identity() + ng * h.identity(), std::move(o),
                  std::move(gens));
}

using Permutation = std::vector<std::uint32_t>;

/// (p q)(x) = p(q(x)).
inline Permutation compose(const Permutation& p, const Permutation& q) {
  Permutation r(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) r[i] = p[q[i]];
  return r;
}

inline Permutation invert(const Permutation& p) {
  Permutation r(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<std::uint32_t>(i);
  return r;
}

inline bool is_permutation(const Permutation& p) {
  std::vector<bool> seen(p.size(), false);
  for (auto x : p) {
    if (x >= p.size() || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

/// Subgroup of Sym(degree) generated by `gens`, enumerated breadth first.
/// Element 0 is the identity and elements 1..k are the generators in order
/// (duplicates and identities dropped).
inline FinGroup permutation_group(std::string name, std::uint32_t degree, const std::vector<Permutation>& gens,
                                  const Caps& caps = {}) {
  for (const auto& p : gens)
    if (p.size() != degree || !is_permutation(p)) throw InputError("invalid permutation generator for " + name);
  struct Data {
    std::vector<Permutation> perms;
    std::map<Permutation, std::uint64_t> index;
    std::vector<std::uint32_t> table;  // filled for small groups
    std::vector<std::uint64_t> inverse;
  };
  auto data = std::make_shared<Data>();
  Permutation id(degree);
  std::iota(id.begin(), id.end(), 0u);
  const auto add = [&](const Permutation& p) {
    if (data->index.count(p)) return;
    check_cap("permutation group order", data->perms.size() + 1, caps.group_enumeration);
    data->index.emplace(p, data->perms.size());
    data->perms.push_back(p);
  };
  add(id);
  std::vector<FinGroup::Element> gen_ids;
  for (const auto& p : gens) {
    add(p);
    const auto e = data->index.at(p);
    if (e != 0 && std::find(gen_ids.begin(), gen_ids.end(), e) == gen_ids.end()) gen_ids.push_back(e);
  }
  for (std::size_t i = 0; i < data->perms.size(); ++i)
    for (const auto& s : gens) add(compose(data->perms[i], s));
  const std::size_t n = data->perms.size();
  data->inverse.resize(n);
  for (std::size_t i = 0; i < n; ++i) data->inverse[i] = data->index.at(invert(data->perms[i]));
  if (n <= 2048) {
    data->table.resize(n * n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        data->table[i * n + j] = static_cast<std::uint32_t>(data->index.at(compose(data->perms[i], data->perms[j])));
  }
  FinGroup::Oracle o{[data, n](FinGroup::Element a, FinGroup::Element b) -> FinGroup::Element {
                       if (!data->table.empty()) return data->table[a * n + b];
                       return data->index.at(compose(data->perms[a], data->perms[b]));
                     },
                     [data](FinGroup::Element a) { return data->inverse[a]; },
                     [data](FinGroup::Element a) {
                       std::string s = "[";
                       for (std::size_t i = 0; i < data->perms[a].size(); ++i)
                         s += (i ? " " : "") + std::to_string(data->perms[a][i]);
                       return s + "]";
                     }};
  return FinGroup(std::move(name), n, 0, std::move(o), std::move(gen_ids));
}

inline FinGroup symmetric_group(std::uint32_t n) {
  if (n <= 1) return FinGroup("S1", 1, 0, {[](auto, auto) { return FinGroup::Element{0}; },
                                           [](auto) { return FinGroup::Element{0}; },
                                           [](auto) { return std::string("[0]"); }});
  Permutation swap(n), cycle(n);
  std::iota(swap.begin(), swap.end(), 0u);
  std::swap(swap[0], swap[1]);
  for (std::uint32_t i = 0; i < n; ++i) cycle[i] = (i + 1) % n;
  return permutation_group("S" + std::to_string(n), n, {swap, cycle});
}

/// A_n generated by the 3-cycles (0 1 k).
inline FinGroup alternating_group(std::uint32_t n) {
  std::vector<Permutation> gens;
  for (std::uint32_t k = 2; k < n; ++k) {
    Permutation p(n);
    std::iota(p.begin(), p.end(), 0u);
    p[0] = 1;
    p[1] = k;
    p[k] = 0;
    gens.push_back(p);
  }
  if (gens.empty()) {
    Permutation id(std::max<std::uint32_t>(n, 1));
    std::iota(id.begin(), id.end(), 0u);
    gens.push_back(id);
  }
  return permutation_group("A" + std::to_string(n), std::max<std::uint32_t>(n, 1), gens);
}

/// Dihedral group of order 2n acting on the n-gon (n >= 3).
inline FinGroup dihedral_group(std::uint32_t n) {
  if (n < 3) throw InputError("dihedral group needs n >= 3");
  Permutation rot(n), ref(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    rot[i] = (i + 1) % n;
    ref[i] = (n - i) % n;
  }
  return permutation_group("D" + std::to_string(n), n, {rot, ref});
}

/// Quaternion group {+-1, +-i, +-j, +-k} from its Cayley table.
inline FinGroup quaternion_group() {
  // Encode q = sign * unit, unit in {1, i, j, k}; index = 4*signbit + unit.
  static constexpr int unit_mul[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int unit_sign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  const char* names[4] = {"1", "i", "j", "k"};
  std::vector<std::string> labels;
  for (int s = 0; s < 2; ++s)
    for (int u = 0; u < 4; ++u) labels.push_back(std::string(s ? "-" : "") + names[u]);
  std::vector<std::vector<std::size_t>> table(8, std::vector<std::size_t>(8));
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b) {
      const int ua = a % 4, ub = b % 4;
      int sign = (a / 4 ? -1 : 1) * (b / 4 ? -1 : 1) * unit_sign[ua][ub];
      table[a][b] = static_cast<std::size_t>((sign < 0 ? 4 : 0) + unit_mul[ua][ub]);
    }
  return FinGroup::from_table("Q8", std::move(labels), table);
}

/// G semidirect H with (g,h)(g',h') = (g * act(h)(g'), h h'); element g + |G| h.
/// `act(h, g)` must define a homomorphism H -> Aut(G); it is checked on
/// `samples` random inputs (exhaustively when |G|^2 |H| is small).
inline FinGroup semidirect_product(const FinGroup& g, const FinGroup& h,
                                   std::function<FinGroup::Element(FinGroup::Element, FinGroup::Element)> act,
                                   std::size_t samples = 10000, std::uint64_t seed = 7) {
  using E = FinGroup::Element;
  const std::uint64_t ng = g.order();
  if (h.order() > UINT64_MAX / ng) throw CapExceeded("semidirect product order", UINT64_MAX, UINT64_MAX);
  const auto fail = [](const std::string& what) { throw HomomorphismFailure("semidirect action: " + what); };
  const bool exhaustive = ng * ng * h.order() <= 200000;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<E> pg(0, ng - 1), ph(0, h.order() - 1);
  const std::size_t trials = exhaustive ? static_cast<std::size_t>(ng * ng * h.order()) : samples;
  for (std::size_t t = 0; t < trials; ++t) {
    E x, y, k;
    if (exhaustive) {
      x = t % ng;
      y = (t / ng) % ng;
      k = t / (ng * ng);
    } else {
      x = pg(rng);
      y = pg(rng);
      k = ph(rng);
    }
    if (act(k, g.mul(x, y)) != g.mul(act(k, x), act(k, y)))
      fail("act(" + h.label(k) + ") is not multiplicative at (" + g.label(x) + ", " + g.label(y) + ")");
    const E k2 = exhaustive ? (t % h.order()) : ph(rng);
    if (act(h.mul(k, k2), x) != act(k, act(k2, x)))
      fail("act is not a homomorphism at (" + h.label(k) + ", " + h.label(k2) + ")");
  }
  if (ng <= 100000) {
    for (E k = 0; k < std::min<std::uint64_t>(h.order(), 64); ++k) {
      std::vector<bool> hit(ng, false);
      for (E x = 0; x < ng; ++x) {
        const E y = act(k, x);
        if (y >= ng || hit[y]) fail("act(" + h.label(k) + ") is not a bijection");
        hit[y] = true;
      }
    }
  }
  FinGroup::Oracle o{
      [g, h, ng, act](E a, E b) {
        const E ga = a % ng, ha = a / ng, gb = b % ng, hb = b / ng;
        return g.mul(ga, act(ha, gb)) + ng * h.mul(ha, hb);
      },
      [g, h, ng, act](E a) {
        const E ga = a % ng, hi = h.inv(a / ng);
        return act(hi, g.inv(ga)) + ng * hi;
      },
      [g, h, ng](E a) { return "(" + g.label(a % ng) + ";" + h.label(a / ng) + ")"; }};
  std::vector<E> gens;
  for (auto x : g.declared_generators()) gens.push_back(x + ng * h.identity());
  for (auto y : h.declared_generators()) gens.push_back(g.identity() + ng * y);
  return FinGroup(g.name() + ":" + h.name(), ng * h.order(), g.identity() + ng * h.identity(), std::move(o),
                  std::move(gens));
}

// ---------------------------------------------------------------------------
// Enumerative helpers (all require order within the enumeration cap)

/// Subgroup generated by `seeds`, as a sorted element list.
inline std::vector<FinGroup::Element> subgroup_closure(const FinGroup& g, const std::vector<FinGroup::Element>& seeds,
                                                       const Caps& caps = {}) {
  std::unordered_set<FinGroup::Element> seen{g.identity()};
  std::vector<FinGroup::Element> out{g.identity()};
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto s : seeds) {
      const auto x = g.mul(out[i], s);
      if (seen.insert(x).second) {
        out.push_back(x);
        check_cap("subgroup closure", out.size(), caps.group_enumeration);
      }
    }
  std::sort(out.begin(), out.end());
  return out;
}

/// Greedy generating set: declared generators when present, otherwise
/// repeatedly adjoin the smallest element outside the current subgroup.
inline std::vector<FinGroup::Element> generating_set(const FinGroup& g, const Caps& caps = {}) {
  if (!g.declared_generators().empty()) return g.declared_generators();
  std::vector<FinGroup::Element> gens;
  std::vector<bool> in(g.order(), false);
  in[g.identity()] = true;
  std::size_t covered = 1;
  check_cap("group enumeration", g.order(), caps.group_enumeration);
  for (FinGroup::Element x = 0; x < g.order() && covered < g.order(); ++x) {
    if (in[x]) continue;
    gens.push_back(x);
    const auto sub = subgroup_closure(g, gens, caps);
    std::fill(in.begin(), in.end(), false);
    for (auto e : sub) in[e] = true;
    covered = sub.size();
  }
  return gens;
}

inline bool is_abelian(const FinGroup& g, const Caps& caps = {}) {
  const auto gens = generating_set(g, caps);
  for (auto a : gens)
    for (auto b : gens)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

/// Conjugacy classes, each sorted, ordered by smallest member.
inline std::vector<std::vector<FinGroup::Element>> conjugacy_classes(const FinGroup& g, const Caps& caps = {}) {
  const auto all = elements(g, caps);
  std::vector<bool> done(g.order(), false);
  std::vector<std::vector<FinGroup::Element>> classes;
  for (auto x : all) {
    if (done[x]) continue;
    std::set<FinGroup::Element> cls;
    for (auto h : all) cls.insert(g.conj(h, x));
    for (auto y : cls) done[y] = true;
    classes.emplace_back(cls.begin(), cls.end());
  }
  return classes;
}

/// Normal closure of `seeds`: smallest normal subgroup containing them.
inline std::vector<FinGroup::Element> normal_closure(const FinGroup& g, std::vector<FinGroup::Element> seeds,
                                                     const Caps& caps = {}) {
  const auto gens = generating_set(g, caps);
  for (;;) {
    const auto sub = subgroup_closure(g, seeds, caps);
    const std::unordered_set<FinGroup::Element> member(sub.begin(), sub.end());
    bool grew = false;
    const auto current = seeds;
    for (auto s : current)
      for (auto x : gens) {
        const auto c = g.conj(x, s);
        if (!member.count(c)) {
          seeds.push_back(c);
          grew = true;
        }
      }
    if (!grew) return sub;
  }
}

/// [G, G] as the normal closure of commutators of generators.
inline std::vector<FinGroup::Element> derived_subgroup(const FinGroup& g, const Caps& caps = {}) {
  const auto gens = generating_set(g, caps);
  std::vector<FinGroup::Element> comms;
  for (auto a : gens)
    for (auto b : gens) comms.push_back(g.commutator(a, b));
  return normal_closure(g, comms, caps);
}

/// Brute-force centralizer of a set: every element checked against every member.
inline std::vector<FinGroup::Element> centralizer(const FinGroup& g, const std::vector<FinGroup::Element>& set,
                                                  const Caps& caps = {}) {
  std::vector<FinGroup::Element> out;
  for (auto x : elements(g, caps)) {
    bool commutes = true;
    for (auto s : set) {
      if (g.mul(x, s) != g.mul(s, x)) {
        commutes = false;
        break;
      }
    }
    if (commutes) out.push_back(x);
  }
  return out;
}

/// Left cosets g H of a subgroup, as the permutation action of G on them.
/// Returns perm[g][c] = index of the coset g * (coset c).
inline std::vector<Permutation> coset_action(const FinGroup& g, const std::vector<FinGroup::Element>& subgroup,
                                             const Caps& caps = {}) {
  const auto all = elements(g, caps);
  std::vector<std::int64_t> coset_of(g.order(), -1);
  std::vector<FinGroup::Element> reps;
  for (auto x : all) {
    if (coset_of[x] >= 0) continue;
    for (auto h : subgroup) coset_of[g.mul(x, h)] = static_cast<std::int64_t>(reps.size());
    reps.push_back(x);
  }
  std::vector<Permutation> perms(g.order(), Permutation(reps.size()));
  for (auto x : all)
    for (std::size_t c = 0; c < reps.size(); ++c)
      perms[x][c] = static_cast<std::uint32_t>(coset_of[g.mul(x, reps[c])]);
  return perms;
}

/// Subgroups up to conjugacy, each as a sorted element list, ordered by
/// size then lexicographically. Enumerates subgroups generated by at most
/// three elements, which covers every subgroup of a group of order < 16.
inline std::vector<std::vector<FinGroup::Element>> subgroup_classes(const FinGroup& g, const Caps& caps = {}) {
  const auto all = elements(g, caps);
  std::set<std::vector<FinGroup::Element>> subs;
  for (auto a : all)
    for (auto b : all) {
      if (b < a) continue;
      subs.insert(subgroup_closure(g, {a, b}, caps));
    }
  std::set<std::vector<FinGroup::Element>> more;
  for (const auto& s : subs)
    for (auto c : all)
      if (!std::binary_search(s.begin(), s.end(), c)) {
        auto gens = s;
        gens.push_back(c);
        more.insert(subgroup_closure(g, gens, caps));
      }
  subs.insert(more.begin(), more.end());
  std::set<std::vector<FinGroup::Element>> canon;
  for (const auto& s : subs) {
    std::vector<FinGroup::Element> best = s;
    for (auto x : all) {
      std::vector<FinGroup::Element> c;
      for (auto e : s) c.push_back(g.conj(x, e));
      std::sort(c.begin(), c.end());
      best = std::min(best, c);
    }
    canon.insert(best);
  }
  std::vector<std::vector<FinGroup::Element>> out(canon.begin(), canon.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.size() < b.size(); });
  return out;
}

}  // namespace vnlab
