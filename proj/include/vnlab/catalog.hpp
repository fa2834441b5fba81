#pragma once

// Test and acceptance catalogs: the groups of order at most 8, the table
// groups used for group algebras, and a catalog of finite actions.
//
// A free action of a finite group on a finite set is a disjoint union of
// copies of the regular action, so the free part of the catalog lists every
// free action on at most 12 atoms up to conjugacy, each with uniform copy
// masses and (for two or more copies) masses proportional to 1, 2, ..., k.

#include <string>
#include <vector>

#include "vnlab/actions.hpp"
#include "vnlab/fingroup.hpp"

namespace vnlab {

/// Every group of order at most 8, up to isomorphism.
inline std::vector<FinGroup> small_groups() {
  std::vector<FinGroup> out;
  for (std::uint64_t n = 1; n <= 8; ++n) out.push_back(cyclic_group(n));
  const auto z2 = cyclic_group(2);
  out.push_back(direct_product(z2, z2));
  out.push_back(direct_product(cyclic_group(4), z2));
  out.push_back(direct_product(direct_product(z2, z2), z2));
  out.push_back(symmetric_group(3));
  out.push_back(dihedral_group(4));
  out.push_back(quaternion_group());
  return out;
}

/// Table groups of order at most 24 used for group algebra checks.
inline std::vector<FinGroup> group_algebra_catalog() {
  std::vector<FinGroup> out;
  for (std::uint64_t n : {1, 2, 3, 4, 5, 6, 7, 8, 12, 24}) out.push_back(cyclic_group(n));
  out.push_back(symmetric_group(3));
  out.push_back(dihedral_group(4));
  out.push_back(quaternion_group());
  out.push_back(alternating_group(4));
  out.push_back(symmetric_group(4));
  return out;
}

struct CatalogEntry {
  std::string name;
  FiniteAction action;
};

inline std::vector<CatalogEntry> action_catalog(const Caps& caps = {}) {
  std::vector<CatalogEntry> out;
  const auto add = [&](std::string name, FiniteAction a) { out.push_back({std::move(name), std::move(a)}); };
  for (const auto& g : small_groups()) {
    const auto order = static_cast<std::size_t>(g.order());
    for (std::size_t k = 1; k * order <= 12; ++k) {
      add(g.name() + " regular x" + std::to_string(k), regular_action(g, k, {}, caps));
      if (k >= 2) {
        const auto total = static_cast<std::int64_t>(k * (k + 1) / 2);
        std::vector<Rational> masses;
        for (std::size_t i = 1; i <= k; ++i) masses.emplace_back(static_cast<std::int64_t>(i), total);
        add(g.name() + " regular x" + std::to_string(k) + " weighted", regular_action(g, k, masses, caps));
      }
    }
  }
  for (const auto& g : small_groups()) {
    if (g.order() == 1) continue;
    for (const auto& h : subgroup_classes(g, caps)) {
      if (h.size() == 1) continue;
      add(g.name() + " on cosets of a subgroup of order " + std::to_string(h.size()), coset_space_action(g, h, caps));
    }
    const auto point = coset_space_action(g, elements(g, caps), caps);
    if (g.order() + 1 <= 12)
      add(g.name() + " regular + fixed point", disjoint_union(regular_action(g, 1, {}, caps), point, Rational(1, 2), caps));
    const FiniteProbSpace two({"a", "b"}, {Weight(Rational(1, 3)), Weight(Rational(2, 3))});
    add(g.name() + " trivial on 2 atoms", trivial_action(g, two, caps));
  }
  add("bernoulli Z2 uniform", bernoulli_action(cyclic_group(2), FiniteProbSpace::uniform(2), caps));
  add("bernoulli Z3 uniform", bernoulli_action(cyclic_group(3), FiniteProbSpace::uniform(2), caps));
  add("bernoulli Z2 biased",
      bernoulli_action(cyclic_group(2), FiniteProbSpace({"0", "1"}, {Weight(Rational(1, 3)), Weight(Rational(2, 3))}), caps));
  add("torus N=2", torus_action(2, {sanov_a(), sanov_b()}, caps));
  return out;
}

}  // namespace vnlab
