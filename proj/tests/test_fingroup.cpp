#include <gtest/gtest.h>

#include "vnlab/fingroup.hpp"

using namespace vnlab;

TEST(FinGroup, BuilderOrders) {
  EXPECT_EQ(cyclic_group(7).order(), 7u);
  EXPECT_EQ(symmetric_group(3).order(), 6u);
  EXPECT_EQ(symmetric_group(4).order(), 24u);
  EXPECT_EQ(alternating_group(4).order(), 12u);
  EXPECT_EQ(alternating_group(5).order(), 60u);
  EXPECT_EQ(dihedral_group(4).order(), 8u);
  EXPECT_EQ(quaternion_group().order(), 8u);
  EXPECT_EQ(direct_product(cyclic_group(2), cyclic_group(3)).order(), 6u);
}

TEST(FinGroup, AxiomsHold) {
  for (const auto& g : {cyclic_group(5), symmetric_group(3), dihedral_group(4), quaternion_group(),
                        direct_product(cyclic_group(2), cyclic_group(4)), alternating_group(4)})
    EXPECT_NO_THROW(validate_group(g)) << g.name();
}

TEST(FinGroup, TableValidation) {
  // not associative: a Latin square with identity that is not a group (order 5 loop)
  const std::vector<std::vector<std::size_t>> loop{
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  EXPECT_THROW(FinGroup::from_table("loop", {"e", "a", "b", "c", "d"}, loop), InputError);
  EXPECT_THROW(FinGroup::from_table("bad", {"e", "a"}, {{0, 1}, {1, 2}}), InputError);
  EXPECT_THROW(FinGroup::from_table("noid", {"a", "b"}, {{1, 1}, {1, 1}}), InputError);
  const auto z2 = FinGroup::from_table("Z2", {"e", "s"}, {{0, 1}, {1, 0}});
  EXPECT_EQ(z2.identity(), 0u);
  EXPECT_EQ(z2.inv(1), 1u);
}

TEST(FinGroup, ConjugacyClassCounts) {
  // class counts: S3 -> 3, D4 -> 5, Q8 -> 5, A4 -> 4, S4 -> 5, A5 -> 5
  EXPECT_EQ(conjugacy_classes(symmetric_group(3)).size(), 3u);
  EXPECT_EQ(conjugacy_classes(dihedral_group(4)).size(), 5u);
  EXPECT_EQ(conjugacy_classes(quaternion_group()).size(), 5u);
  EXPECT_EQ(conjugacy_classes(alternating_group(4)).size(), 4u);
  EXPECT_EQ(conjugacy_classes(symmetric_group(4)).size(), 5u);
  EXPECT_EQ(conjugacy_classes(alternating_group(5)).size(), 5u);
  EXPECT_EQ(conjugacy_classes(cyclic_group(6)).size(), 6u);
}

TEST(FinGroup, DerivedSubgroups) {
  EXPECT_EQ(derived_subgroup(alternating_group(5)).size(), 60u);
  EXPECT_EQ(derived_subgroup(symmetric_group(3)).size(), 3u);
  EXPECT_EQ(derived_subgroup(quaternion_group()).size(), 2u);
  EXPECT_EQ(derived_subgroup(cyclic_group(9)).size(), 1u);
  EXPECT_TRUE(is_abelian(cyclic_group(9)));
  EXPECT_FALSE(is_abelian(dihedral_group(4)));
}

TEST(FinGroup, Centralizers) {
  const auto s3 = symmetric_group(3);
  EXPECT_EQ(centralizer(s3, elements(s3)).size(), 1u);
  const auto q8 = quaternion_group();
  EXPECT_EQ(centralizer(q8, elements(q8)).size(), 2u);
}

TEST(FinGroup, SemidirectProduct) {
  // Z3 : Z2 with inversion is S3-like: nonabelian of order 6
  const auto z3 = cyclic_group(3), z2 = cyclic_group(2);
  const auto g = semidirect_product(z3, z2, [](FinGroup::Element h, FinGroup::Element x) { return h ? (3 - x) % 3 : x; });
  EXPECT_EQ(g.order(), 6u);
  EXPECT_NO_THROW(validate_group(g));
  EXPECT_FALSE(is_abelian(g));
  EXPECT_EQ(conjugacy_classes(g).size(), 3u);
  // trivial H gives a copy of G
  const auto copy = semidirect_product(z3, trivial_group(), [](FinGroup::Element, FinGroup::Element x) { return x; });
  EXPECT_EQ(copy.order(), 3u);
  EXPECT_TRUE(is_abelian(copy));
  // non-automorphism rejected
  EXPECT_THROW(semidirect_product(z3, z2, [](FinGroup::Element h, FinGroup::Element x) { return h ? 0 : x; }),
               HomomorphismFailure);
}

TEST(FinGroup, SubgroupClassesAndCosets) {
  // S3 has 4 subgroup classes: 1, Z2, Z3, S3
  const auto s3 = symmetric_group(3);
  const auto subs = subgroup_classes(s3);
  EXPECT_EQ(subs.size(), 4u);
  // D4 has 8 classes; Q8 (6 subgroups) and Z2^3 (16) have only normal subgroups
  EXPECT_EQ(subgroup_classes(dihedral_group(4)).size(), 8u);
  EXPECT_EQ(subgroup_classes(quaternion_group()).size(), 6u);
  const auto z2 = cyclic_group(2);
  EXPECT_EQ(subgroup_classes(direct_product(direct_product(z2, z2), z2)).size(), 16u);
  const auto perms = coset_action(s3, subs[1]);
  ASSERT_EQ(perms.size(), 6u);
  EXPECT_EQ(perms[0].size(), 3u);
  for (FinGroup::Element g = 0; g < 6; ++g)
    for (FinGroup::Element h = 0; h < 6; ++h) EXPECT_EQ(compose(perms[g], perms[h]), perms[s3.mul(g, h)]);
}
