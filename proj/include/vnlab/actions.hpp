#pragma once

// Measure-preserving actions of finite groups on finite probability spaces.
//
// On a finite space where every atom has positive mass, invariant sets are
// unions of orbits, so ergodic means a single orbit and almost-everywhere
// free means no group element other than the identity fixes an atom.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "vnlab/caps.hpp"
#include "vnlab/error.hpp"
#include "vnlab/fingroup.hpp"
#include "vnlab/weight.hpp"

namespace vnlab {

class FiniteProbSpace {
 public:
  /// Validates: weights strictly positive and summing to 1 (exactly when all
  /// are rational, within 1e-9 otherwise).
  FiniteProbSpace(std::vector<std::string> atoms, std::vector<Weight> weights)
      : atoms_(std::move(atoms)), weights_(std::move(weights)) {
    if (atoms_.empty()) throw InputError("probability space has no atoms");
    if (atoms_.size() != weights_.size())
      throw InputError("probability space has " + std::to_string(atoms_.size()) + " atoms but " +
                       std::to_string(weights_.size()) + " weights");
    Weight total(Rational(0));
    for (std::size_t i = 0; i < weights_.size(); ++i) {
      if (!(weights_[i].value() > 0.0)) throw InputError("atom '" + atoms_[i] + "' has non-positive weight");
      total = total + weights_[i];
    }
    if (!(total == Weight(Rational(1)))) throw InputError("atom weights sum to " + total.str() + ", not 1");
  }

  static FiniteProbSpace uniform(std::size_t n) {
    std::vector<std::string> atoms;
    std::vector<Weight> w;
    for (std::size_t i = 0; i < n; ++i) {
      atoms.push_back(std::to_string(i));
      w.emplace_back(Rational(1, static_cast<std::int64_t>(n)));
    }
    return FiniteProbSpace(std::move(atoms), std::move(w));
  }

  std::size_t size() const noexcept { return atoms_.size(); }
  const std::vector<std::string>& atoms() const noexcept { return atoms_; }
  const std::vector<Weight>& weights() const noexcept { return weights_; }
  const Weight& weight(std::size_t i) const { return weights_.at(i); }

 private:
  std::vector<std::string> atoms_;
  std::vector<Weight> weights_;
};

/// Sorted multiset of orbit descriptors; each descriptor is the sorted list
/// of atom weights in one orbit.
class OrbitSignature {
 public:
  OrbitSignature() = default;
  explicit OrbitSignature(std::vector<std::vector<Weight>> orbits) : orbits_(std::move(orbits)) {
    const auto less_w = [](const Weight& a, const Weight& b) { return compare(a, b) < 0; };
    for (auto& o : orbits_) std::sort(o.begin(), o.end(), less_w);
    std::sort(orbits_.begin(), orbits_.end(), [&](const auto& x, const auto& y) {
      if (x.size() != y.size()) return x.size() < y.size();
      return std::lexicographical_compare(x.begin(), x.end(), y.begin(), y.end(), less_w);
    });
  }

  const std::vector<std::vector<Weight>>& orbits() const noexcept { return orbits_; }

  friend bool operator==(const OrbitSignature& a, const OrbitSignature& b) {
    if (a.orbits_.size() != b.orbits_.size()) return false;
    for (std::size_t i = 0; i < a.orbits_.size(); ++i) {
      if (a.orbits_[i].size() != b.orbits_[i].size()) return false;
      for (std::size_t j = 0; j < a.orbits_[i].size(); ++j)
        if (!(a.orbits_[i][j] == b.orbits_[i][j])) return false;
    }
    return true;
  }

  std::string str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < orbits_.size(); ++i) {
      s += i ? ",[" : "[";
      for (std::size_t j = 0; j < orbits_[i].size(); ++j) s += (j ? "," : "") + orbits_[i][j].str();
      s += "]";
    }
    return s + "]";
  }

 private:
  std::vector<std::vector<Weight>> orbits_;
};

class FiniteAction {
 public:
  const FinGroup& group() const noexcept { return group_; }
  const FiniteProbSpace& space() const noexcept { return space_; }
  /// perm()[g][x] is the image of atom x under g.
  const std::vector<Permutation>& perm() const noexcept { return perm_; }
  std::uint32_t apply(FinGroup::Element g, std::size_t x) const { return perm_[g][x]; }
  const std::string& name() const noexcept { return name_; }

 private:
  FiniteAction(FinGroup g, FiniteProbSpace s, std::vector<Permutation> p, std::string name)
      : group_(std::move(g)), space_(std::move(s)), perm_(std::move(p)), name_(std::move(name)) {}

  friend FiniteAction make_action(FinGroup, FiniteProbSpace, std::vector<Permutation>, std::string, const Caps&);

  FinGroup group_;
  FiniteProbSpace space_;
  std::vector<Permutation> perm_;
  std::string name_;
};

/// Validates and builds an action. Throws HomomorphismFailure or
/// NotMeasurePreserving with a witness.
inline FiniteAction make_action(FinGroup group, FiniteProbSpace space, std::vector<Permutation> perm,
                                std::string name = {}, const Caps& caps = {}) {
  const std::uint64_t order = group.order();
  const std::size_t n = space.size();
  check_cap("action entries", order * n, caps.action_entries);
  if (perm.size() != order)
    throw InputError("action lists " + std::to_string(perm.size()) + " permutations for a group of order " +
                     std::to_string(order));
  for (std::uint64_t g = 0; g < order; ++g)
    if (perm[g].size() != n || !is_permutation(perm[g]))
      throw InputError("image of " + group.label(g) + " is not a permutation of the " + std::to_string(n) + " atoms");
  const auto hom_fail = [&](FinGroup::Element g, FinGroup::Element h, std::size_t x) {
    throw HomomorphismFailure("perm(" + group.label(g) + ") perm(" + group.label(h) + ") != perm(" +
                              group.label(group.mul(g, h)) + ") at atom " + space.atoms()[x]);
  };
  const auto check_pair = [&](FinGroup::Element g, FinGroup::Element h) {
    const auto& pg = perm[g];
    const auto& ph = perm[h];
    const auto& pgh = perm[group.mul(g, h)];
    for (std::size_t x = 0; x < n; ++x)
      if (pg[ph[x]] != pgh[x]) hom_fail(g, h, x);
  };
  if (order * order * n <= 20000000) {
    for (FinGroup::Element g = 0; g < order; ++g)
      for (FinGroup::Element h = 0; h < order; ++h) check_pair(g, h);
  } else {
    // every element against a generating set, which determines the homomorphism
    for (FinGroup::Element g = 0; g < order; ++g)
      for (auto s : generating_set(group, caps)) check_pair(g, s);
  }
  for (std::size_t x = 0; x < n; ++x)
    if (perm[group.identity()][x] != x) hom_fail(group.identity(), group.identity(), x);
  for (FinGroup::Element g = 0; g < order; ++g)
    for (std::size_t x = 0; x < n; ++x)
      if (!(space.weight(perm[g][x]) == space.weight(x)))
        throw NotMeasurePreserving(group.label(g) + " sends atom " + space.atoms()[x] + " (weight " +
                                   space.weight(x).str() + ") to atom " + space.atoms()[perm[g][x]] + " (weight " +
                                   space.weight(perm[g][x]).str() + ")");
  return FiniteAction(std::move(group), std::move(space), std::move(perm), std::move(name));
}

struct ActionReport {
  bool is_free = false;
  bool is_ergodic = false;
  std::vector<std::vector<std::size_t>> orbits;  // each sorted; ordered by smallest atom
  OrbitSignature signature;
};

inline std::vector<std::vector<std::size_t>> orbits(const FiniteAction& a) {
  const std::size_t n = a.space().size();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t x = 0; x < n; ++x) {
    if (seen[x]) continue;
    std::vector<std::size_t> orbit;
    for (const auto& p : a.perm())
      if (!seen[p[x]]) {
        seen[p[x]] = true;
        orbit.push_back(p[x]);
      }
    std::sort(orbit.begin(), orbit.end());
    out.push_back(std::move(orbit));
  }
  return out;
}

inline OrbitSignature orbit_signature(const FiniteAction& a) {
  std::vector<std::vector<Weight>> desc;
  for (const auto& o : orbits(a)) {
    std::vector<Weight> w;
    for (auto x : o) w.push_back(a.space().weight(x));
    desc.push_back(std::move(w));
  }
  return OrbitSignature(std::move(desc));
}

inline bool is_free(const FiniteAction& a) {
  for (FinGroup::Element g = 0; g < a.group().order(); ++g) {
    if (g == a.group().identity()) continue;
    for (std::size_t x = 0; x < a.space().size(); ++x)
      if (a.apply(g, x) == x) return false;
  }
  return true;
}

inline ActionReport action_report(const FiniteAction& a) {
  ActionReport r;
  r.orbits = orbits(a);
  r.is_free = is_free(a);
  r.is_ergodic = r.orbits.size() == 1;
  r.signature = orbit_signature(a);
  return r;
}

inline bool orbit_equivalent(const FiniteAction& a, const FiniteAction& b) {
  return orbit_signature(a) == orbit_signature(b);
}

/// Left Bernoulli shift on base^G: (g.x)(h) = x(g^-1 h). Atom labels list
/// x(h) for h = 0, 1, ... joined by ".", or concatenated when every base
/// label is a single character.
inline FiniteAction bernoulli_action(const FinGroup& g, const FiniteProbSpace& base, const Caps& caps = {}) {
  const std::uint64_t order = g.order();
  const std::uint64_t b = base.size();
  const double requested = std::pow(static_cast<double>(b), static_cast<double>(order));
  if (requested > static_cast<double>(caps.bernoulli_atoms))
    throw CapExceeded("Bernoulli atoms", requested > 1.8e19 ? UINT64_MAX : static_cast<std::uint64_t>(requested),
                      caps.bernoulli_atoms);
  std::uint64_t atoms = 1;
  for (std::uint64_t i = 0; i < order; ++i) atoms *= b;
  const bool short_labels =
      std::all_of(base.atoms().begin(), base.atoms().end(), [](const std::string& s) { return s.size() == 1; });
  std::vector<std::string> labels(atoms);
  std::vector<Weight> weights(atoms);
  std::vector<std::uint32_t> digits(order);
  for (std::uint64_t code = 0; code < atoms; ++code) {
    std::uint64_t c = code;
    Weight w(Rational(1));
    std::string label;
    for (std::uint64_t h = 0; h < order; ++h) {
      digits[h] = static_cast<std::uint32_t>(c % b);
      c /= b;
      w = w * base.weight(digits[h]);
      if (!short_labels && h) label += ".";
      label += base.atoms()[digits[h]];
    }
    labels[code] = std::move(label);
    weights[code] = w;
  }
  std::vector<Permutation> perm(order, Permutation(atoms));
  for (FinGroup::Element el = 0; el < order; ++el) {
    const auto gi = g.inv(el);
    std::vector<std::uint64_t> src(order);  // (g.x)(h) = x(src[h])
    for (std::uint64_t h = 0; h < order; ++h) src[h] = g.mul(gi, h);
    for (std::uint64_t code = 0; code < atoms; ++code) {
      std::uint64_t c = code;
      for (std::uint64_t h = 0; h < order; ++h) {
        digits[h] = static_cast<std::uint32_t>(c % b);
        c /= b;
      }
      std::uint64_t image = 0, place = 1;
      for (std::uint64_t h = 0; h < order; ++h) {
        image += digits[src[h]] * place;
        place *= b;
      }
      perm[el][code] = static_cast<std::uint32_t>(image);
    }
  }
  return make_action(g, FiniteProbSpace(std::move(labels), std::move(weights)), std::move(perm),
                     "bernoulli(" + g.name() + ")", caps);
}

using IntMatrix2 = std::array<std::int64_t, 4>;  // row major ((m0, m1), (m2, m3))

/// The two matrices ((1,2),(0,1)) and ((1,0),(2,1)), which generate a free
/// subgroup of SL(2,Z).
inline IntMatrix2 sanov_a() { return {1, 2, 0, 1}; }
inline IntMatrix2 sanov_b() { return {1, 0, 2, 1}; }

namespace detail {

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
  const std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

inline IntMatrix2 mat_mul_mod(const IntMatrix2& x, const IntMatrix2& y, std::int64_t n) {
  return {mod(x[0] * y[0] + x[1] * y[2], n), mod(x[0] * y[1] + x[1] * y[3], n),
          mod(x[2] * y[0] + x[3] * y[2], n), mod(x[2] * y[1] + x[3] * y[3], n)};
}

}  // namespace detail

/// Action of the matrix group generated by `mats` mod N on the character
/// group of (Z/N)^2: y -> (g^-1)^T y. Uniform weights on N^2 atoms.
inline FiniteAction torus_action(std::int64_t modulus, const std::vector<IntMatrix2>& mats, const Caps& caps = {}) {
  if (modulus < 1) throw InputError("torus modulus must be at least 1");
  const std::int64_t n = modulus;
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const auto& m = mats[i];
    const std::int64_t det = detail::mod(m[0] * m[3] - m[1] * m[2], n);
    if (std::gcd(det, n) != 1 && n > 1)
      throw InputError("matrix " + std::to_string(i) + " is not invertible mod " + std::to_string(n));
  }
  struct Data {
    std::vector<IntMatrix2> elems;
    std::map<IntMatrix2, std::uint64_t> index;
    std::vector<std::uint64_t> inverse;
  };
  auto data = std::make_shared<Data>();
  const IntMatrix2 id{1 % n, 0, 0, 1 % n};
  const auto add = [&](const IntMatrix2& m) {
    if (data->index.count(m)) return;
    check_cap("torus group closure", data->elems.size() + 1, caps.torus_group);
    data->index.emplace(m, data->elems.size());
    data->elems.push_back(m);
  };
  add(id);
  std::vector<IntMatrix2> gens;
  for (const auto& m : mats) {
    IntMatrix2 r{detail::mod(m[0], n), detail::mod(m[1], n), detail::mod(m[2], n), detail::mod(m[3], n)};
    gens.push_back(r);
    add(r);
  }
  for (std::size_t i = 0; i < data->elems.size(); ++i)
    for (const auto& s : gens) add(detail::mat_mul_mod(data->elems[i], s, n));
  const std::size_t order = data->elems.size();
  data->inverse.resize(order);
  for (std::size_t i = 0; i < order; ++i)
    for (std::size_t j = 0; j < order; ++j)
      if (detail::mat_mul_mod(data->elems[i], data->elems[j], n) == id) {
        data->inverse[i] = j;
        break;
      }
  FinGroup::Oracle o{[data, n](FinGroup::Element a, FinGroup::Element b) {
                       return data->index.at(detail::mat_mul_mod(data->elems[a], data->elems[b], n));
                     },
                     [data](FinGroup::Element a) { return data->inverse[a]; },
                     [data](FinGroup::Element a) {
                       const auto& m = data->elems[a];
                       return "[[" + std::to_string(m[0]) + "," + std::to_string(m[1]) + "],[" + std::to_string(m[2]) +
                              "," + std::to_string(m[3]) + "]]";
                     }};
  std::vector<FinGroup::Element> gen_ids;
  for (const auto& s : gens) {
    const auto e = data->index.at(s);
    if (e != 0 && std::find(gen_ids.begin(), gen_ids.end(), e) == gen_ids.end()) gen_ids.push_back(e);
  }
  FinGroup group("GL2(Z/" + std::to_string(n) + ")-sub", order, 0, std::move(o), std::move(gen_ids));

  const std::size_t atoms = static_cast<std::size_t>(n * n);
  check_cap("action entries", order * atoms, caps.action_entries);
  std::vector<std::string> labels;
  std::vector<Weight> weights;
  for (std::int64_t y0 = 0; y0 < n; ++y0)
    for (std::int64_t y1 = 0; y1 < n; ++y1) {
      labels.push_back("(" + std::to_string(y0) + "," + std::to_string(y1) + ")");
      weights.emplace_back(Rational(1, n * n));
    }
  std::vector<Permutation> perm(order, Permutation(atoms));
  for (std::size_t g = 0; g < order; ++g) {
    const auto& m = data->elems[data->inverse[g]];  // (g^-1), applied transposed
    for (std::int64_t y0 = 0; y0 < n; ++y0)
      for (std::int64_t y1 = 0; y1 < n; ++y1) {
        const std::int64_t z0 = detail::mod(m[0] * y0 + m[2] * y1, n);
        const std::int64_t z1 = detail::mod(m[1] * y0 + m[3] * y1, n);
        perm[g][static_cast<std::size_t>(y0 * n + y1)] = static_cast<std::uint32_t>(z0 * n + z1);
      }
  }
  return make_action(std::move(group), FiniteProbSpace(std::move(labels), std::move(weights)), std::move(perm),
                     "torus(N=" + std::to_string(n) + ")", caps);
}

/// G acting on itself by left multiplication, `copies` times, with the
/// given per-copy masses (uniform when empty).
inline FiniteAction regular_action(const FinGroup& g, std::size_t copies = 1, std::vector<Rational> copy_mass = {},
                                   const Caps& caps = {}) {
  if (copies == 0) throw InputError("regular action needs at least one copy");
  if (copy_mass.empty()) copy_mass.assign(copies, Rational(1, static_cast<std::int64_t>(copies)));
  if (copy_mass.size() != copies) throw InputError("one mass per copy required");
  const auto order = g.order();
  const auto elems = elements(g, caps);
  std::vector<std::string> labels;
  std::vector<Weight> weights;
  for (std::size_t c = 0; c < copies; ++c)
    for (auto x : elems) {
      labels.push_back(copies == 1 ? g.label(x) : g.label(x) + "#" + std::to_string(c));
      weights.emplace_back(copy_mass[c] / Rational(static_cast<std::int64_t>(order)));
    }
  std::vector<Permutation> perm(order, Permutation(copies * order));
  for (auto el : elems)
    for (std::size_t c = 0; c < copies; ++c)
      for (auto x : elems) perm[el][c * order + x] = static_cast<std::uint32_t>(c * order + g.mul(el, x));
  return make_action(g, FiniteProbSpace(std::move(labels), std::move(weights)), std::move(perm),
                     g.name() + " regular x" + std::to_string(copies), caps);
}

/// Trivial action of G on a space.
inline FiniteAction trivial_action(const FinGroup& g, const FiniteProbSpace& space, const Caps& caps = {}) {
  Permutation id(space.size());
  std::iota(id.begin(), id.end(), 0u);
  return make_action(g, space, std::vector<Permutation>(g.order(), id), g.name() + " trivial", caps);
}

/// G acting on left cosets G/H with uniform weights.
inline FiniteAction coset_space_action(const FinGroup& g, const std::vector<FinGroup::Element>& subgroup,
                                       const Caps& caps = {}) {
  auto perm = coset_action(g, subgroup, caps);
  const std::size_t n = perm.front().size();
  return make_action(g, FiniteProbSpace::uniform(n), std::move(perm),
                     g.name() + "/H" + std::to_string(subgroup.size()), caps);
}

/// Disjoint union of two actions of the same group, rescaling masses by
/// `first_mass` and 1 - first_mass.
inline FiniteAction disjoint_union(const FiniteAction& a, const FiniteAction& b, Rational first_mass,
                                   const Caps& caps = {}) {
  if (a.group().order() != b.group().order() || a.group().name() != b.group().name())
    throw InputError("disjoint union needs actions of the same group");
  const Weight wa(first_mass), wb(Rational(1) - first_mass);
  std::vector<std::string> labels;
  std::vector<Weight> weights;
  for (std::size_t x = 0; x < a.space().size(); ++x) {
    labels.push_back(a.space().atoms()[x] + "'");
    weights.push_back(a.space().weight(x) * wa);
  }
  for (std::size_t x = 0; x < b.space().size(); ++x) {
    labels.push_back(b.space().atoms()[x] + "\"");
    weights.push_back(b.space().weight(x) * wb);
  }
  const std::size_t na = a.space().size();
  std::vector<Permutation> perm(a.group().order());
  for (FinGroup::Element g = 0; g < a.group().order(); ++g) {
    perm[g] = a.perm()[g];
    for (auto y : b.perm()[g]) perm[g].push_back(static_cast<std::uint32_t>(y + na));
  }
  return make_action(a.group(), FiniteProbSpace(std::move(labels), std::move(weights)), std::move(perm),
                     a.name() + " + " + b.name(), caps);
}

}  // namespace vnlab
