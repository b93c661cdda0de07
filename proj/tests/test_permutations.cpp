#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "moulton/permutations.hpp"
#include "test_support.hpp"

using namespace moulton;
using Tag = TrichotomyResult::Tag;

namespace {
std::size_t factorial_for_test(std::size_t n) { return n <= 1 ? 1 : n * factorial_for_test(n - 1); }
}  // namespace

TEST(Ordering, Validation) {
  EXPECT_THROW(Ordering({1, 1, 2}), Error);
  EXPECT_THROW(Ordering({0, 1}), Error);
  EXPECT_THROW(Ordering({1, 3}), Error);
  EXPECT_NO_THROW(Ordering({2, 3, 1}));
}

TEST(Ordering, ParseAndPrint) {
  const Ordering s = parse_ordering("2,1,3");
  EXPECT_EQ(s, Ordering({2, 1, 3}));
  EXPECT_EQ(to_string(s), "2,1,3");
  EXPECT_THROW(parse_ordering("1,x,3"), Error);
  EXPECT_THROW(parse_ordering("1,2,2"), Error);
}

TEST(Ordering, InverseIsBodyToPlace) {
  const Ordering s{3, 1, 2};  // body 3 leftmost
  EXPECT_EQ(s.inverse(), Ordering({2, 3, 1}));
  EXPECT_EQ(s.inverse().inverse(), s);
}

TEST(Enumerate, Counts) {
  const auto two = enumerate_orderings(2);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0], Ordering({1, 2}));
  EXPECT_EQ(two[1], Ordering({2, 1}));
  EXPECT_EQ(enumerate_orderings(3).size(), 6u);

  const auto five = enumerate_orderings(5);
  EXPECT_EQ(five.size(), 120u);
  EXPECT_EQ(std::set<Ordering>(five.begin(), five.end()).size(), 120u);
  EXPECT_TRUE(std::is_sorted(five.begin(), five.end()));

  EXPECT_EQ(enumerate_orderings(8).size(), 40320u);
  try {
    enumerate_orderings(kMaxEnumerationSize + 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeLimit);
  }
}

TEST(Reverse, Examples) {
  EXPECT_EQ(reverse({1, 2, 3}), Ordering({3, 2, 1}));
  EXPECT_EQ(reverse({2, 1, 3}), Ordering({3, 1, 2}));
  for (const auto& s : enumerate_orderings(4)) EXPECT_EQ(reverse(reverse(s)), s);
}

TEST(Mirror, RelatesInverseAndReverse) {
  for (const auto& s : enumerate_orderings(5)) {
    EXPECT_EQ(mirror(s.inverse()), reverse(s).inverse());
  }
}

TEST(CanonicalClass, Examples) {
  EXPECT_EQ(canonical_class({3, 2, 1}), Ordering({1, 2, 3}));
  EXPECT_EQ(canonical_class({2, 3, 1}), Ordering({1, 3, 2}));
  std::set<Ordering> classes;
  for (const auto& s : enumerate_orderings(4)) classes.insert(canonical_class(s));
  EXPECT_EQ(classes.size(), 12u);
}

TEST(CanonicalClass, PartitionsIntoPairs) {
  for (std::size_t n = 2; n <= 6; ++n) {
    std::map<Ordering, int> sizes;
    for (const auto& s : enumerate_orderings(n)) {
      EXPECT_EQ(canonical_class(s), canonical_class(reverse(s)));
      ++sizes[canonical_class(s)];
    }
    EXPECT_EQ(sizes.size(), factorial_for_test(n) / 2);
    for (const auto& [rep, size] : sizes) EXPECT_EQ(size, 2);
    EXPECT_EQ(canonical_classes(n).size(), sizes.size());
  }
}

TEST(Compatibility, Examples) {
  EXPECT_TRUE(is_compatible({1, 2, 3, 4}, {1, 2, 3}));
  EXPECT_TRUE(is_compatible({1, 2, 4, 3}, {1, 2, 3}));
  EXPECT_FALSE(is_compatible({2, 1, 3, 4}, {1, 2, 3}));
  try {
    is_compatible({1, 2}, {1, 2, 3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeMismatch);
  }
}

TEST(Compatibility, AgreesWithIncreasingMapCriterion) {
  // s restricted to places of bodies 1..n composed with base^{-1} must be increasing:
  // the place in `ext` of base(k) increases with k.
  for (const auto& ext : enumerate_orderings(5)) {
    const Ordering ext_places = ext.inverse();
    for (const auto& base : enumerate_orderings(3)) {
      bool increasing = true;
      for (std::size_t k = 1; k < 3; ++k) {
        increasing = increasing && ext_places(static_cast<std::size_t>(base(k))) <
                                       ext_places(static_cast<std::size_t>(base(k + 1)));
      }
      EXPECT_EQ(is_compatible(ext, base), increasing);
    }
  }
}

TEST(Compatibility, AgreesWithSamplingOracle) {
  std::mt19937_64 rng(21);
  for (const auto& ext : enumerate_orderings(5)) {
    for (const auto& base : enumerate_orderings(3)) {
      bool all_project = true;
      for (int k = 0; k < 10; ++k) {
        const Configuration x = moulton::testing::random_point_in_cone(rng, ext);
        const Configuration y{x[0], x[1], x[2]};
        all_project = all_project && ordering_of(y) == base;
      }
      EXPECT_EQ(is_compatible(ext, base), all_project) << to_string(ext) << " / "
                                                       << to_string(base);
    }
  }
}

TEST(Betweenness, Examples) {
  EXPECT_EQ(betweenness_witness({1, 2, 3}, {1, 2, 3}).tag, Tag::Equal);
  EXPECT_EQ(betweenness_witness({1, 2, 3}, {3, 2, 1}).tag, Tag::Reversed);
  const auto w = betweenness_witness({1, 2, 3}, {1, 3, 2});
  EXPECT_EQ(w, (TrichotomyResult{Tag::Witness, 2, 1, 3}));
  EXPECT_THROW(betweenness_witness({1, 2}, {1, 2, 3}), Error);
}

TEST(Betweenness, ExhaustiveTrichotomyOnS4) {
  const auto all = enumerate_orderings(4);
  int equal = 0, reversed = 0, witness = 0;
  for (const auto& s : all) {
    for (const auto& t : all) {
      const auto r = betweenness_witness(s, t);
      // Independent predicate: does any triple separate s from t?
      bool separable = false;
      for (std::size_t i = 1; i <= 4; ++i)
        for (std::size_t j = 1; j <= 4; ++j)
          for (std::size_t k = 1; k <= 4; ++k) {
            const auto btw = [&](const Ordering& o) {
              return (o(j) < o(i) && o(i) < o(k)) || (o(k) < o(i) && o(i) < o(j));
            };
            separable = separable || (btw(s) && !btw(t));
          }
      const int branches = (s == t) + (s == mirror(t)) + separable;
      EXPECT_EQ(branches, 1) << to_string(s) << " vs " << to_string(t);
      switch (r.tag) {
        case Tag::Equal: ++equal; EXPECT_EQ(s, t); break;
        case Tag::Reversed: ++reversed; EXPECT_EQ(s, mirror(t)); break;
        case Tag::Witness:
          ++witness;
          EXPECT_TRUE(separable);
          EXPECT_TRUE(is_between(s, r.i, r.j, r.k));
          EXPECT_FALSE(is_between(t, r.i, r.j, r.k));
          break;
      }
    }
  }
  EXPECT_EQ(equal, 24);
  EXPECT_EQ(reversed, 24);
  EXPECT_EQ(witness, 576 - 48);
}

TEST(Betweenness, OnInversesReversedMeansMirrorImageOnTheLine) {
  for (const auto& s : enumerate_orderings(4)) {
    for (const auto& t : enumerate_orderings(4)) {
      const auto r = betweenness_witness(s.inverse(), t.inverse());
      EXPECT_EQ(r.tag == Tag::Reversed, s == reverse(t) && s != t);
    }
  }
}

TEST(Cone, Membership) {
  EXPECT_TRUE(in_cone({0.0, 1.0, 2.0}, {1, 2, 3}));
  EXPECT_TRUE(in_cone({2.0, 1.0, 0.0}, {3, 2, 1}));
  EXPECT_FALSE(in_cone({0.0, 1.0, 1.0}, {1, 2, 3}));
  EXPECT_EQ(ordering_of({0.5, -1.0, 3.0}), Ordering({2, 1, 3}));
  EXPECT_EQ(restrict_to_first({4, 2, 1, 3}, 3), Ordering({2, 1, 3}));
}
