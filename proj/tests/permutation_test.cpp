#include "mutime/permutation.hpp"

#include <gtest/gtest.h>

#include <array>
#include <functional>
#include <map>
#include <queue>

namespace mutime {
namespace {

Permutation cyc(int n, std::vector<std::vector<int>> c) { return Permutation::from_cycles(n, c); }

// S_3 multiplication table built from plain functions on {1,2,3}, without
// going through compose().
TEST(ComposeTest, MatchesFirstPrinciplesTableOnS3) {
  using Fn = std::array<int, 4>;  // index 1..3
  std::vector<Fn> elems;
  for (const auto& p : all_permutations(3)) elems.push_back({0, p(1), p(2), p(3)});
  for (const Fn& f : elems) {
    for (const Fn& g : elems) {
      Fn h{0, f[g[1]], f[g[2]], f[g[3]]};
      Permutation pf({f[1], f[2], f[3]}), pg({g[1], g[2], g[3]});
      EXPECT_EQ(compose(pf, pg), Permutation({h[1], h[2], h[3]}));
    }
  }
  // (1 2)(2 3): 1 -> 1 -> 2, 2 -> 3 -> 3, 3 -> 2 -> 1.
  EXPECT_EQ(compose(cyc(3, {{1, 2}}), cyc(3, {{2, 3}})), cyc(3, {{1, 2, 3}}));
}

TEST(ComposeTest, IdentityInverseAndSizeMismatch) {
  const Permutation pi({3, 1, 4, 2});
  EXPECT_EQ(compose(Permutation::identity(4), pi), pi);
  EXPECT_EQ(compose(pi, invert(pi)), Permutation::identity(4));
  EXPECT_EQ(compose(invert(pi), pi), Permutation::identity(4));
  EXPECT_THROW(compose(pi, Permutation::identity(3)), SizeMismatch);
}

TEST(ComposeTest, AssociativeOnS4) {
  auto all = all_permutations(4);
  for (std::size_t a = 0; a < all.size(); a += 5)
    for (std::size_t b = 0; b < all.size(); b += 3)
      for (std::size_t c = 0; c < all.size(); c += 7)
        EXPECT_EQ(compose(all[a], compose(all[b], all[c])), compose(compose(all[a], all[b]), all[c]));
}

TEST(InvertTest, SmallCases) {
  EXPECT_EQ(invert(Permutation::identity(3)), Permutation::identity(3));
  EXPECT_EQ(invert(cyc(3, {{1, 2}})), cyc(3, {{1, 2}}));
  EXPECT_EQ(invert(cyc(3, {{1, 2, 3}})), cyc(3, {{1, 3, 2}}));
}

TEST(PermutationTest, RejectsNonBijection) {
  EXPECT_THROW(Permutation({1, 1, 2}), std::invalid_argument);
  EXPECT_THROW(Permutation({0, 1}), std::invalid_argument);
  EXPECT_THROW(parse_permutation("[1,x]"), std::invalid_argument);
}

TEST(CyclesTest, CanonicalForms) {
  EXPECT_EQ(to_string(cycles(Permutation::identity(3))), "(1)(2)(3)");
  EXPECT_EQ(to_string(cycles(cyc(4, {{1, 2, 3, 4}}))), "(1 2 3 4)");
  EXPECT_EQ(to_string(cycles(cyc(4, {{3, 4}, {2, 1}}))), "(1 2)(3 4)");
  EXPECT_EQ(to_string(cycles(cyc(5, {{4, 2, 5}}))), "(1)(2 5 4)(3)");
}

TEST(CyclesTest, RoundTripExhaustive) {
  for (int n = 1; n <= 5; ++n)
    for (const auto& p : all_permutations(n)) EXPECT_EQ(cycles(p).reconstruct(), p);
}

TEST(CayleyLengthTest, Examples) {
  EXPECT_EQ(cayley_length(Permutation::identity(4)), 0);
  EXPECT_EQ(cayley_length(cyc(4, {{1, 2, 3, 4}})), 3);
  EXPECT_EQ(cayley_length(cyc(4, {{1, 2}, {3, 4}})), 2);
}

TEST(CayleyLengthTest, EqualsBfsDistanceUpToN6) {
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> dist(factorial(n), -1);
    std::queue<Permutation> q;
    q.push(Permutation::identity(n));
    dist[rank(q.front())] = 0;
    const auto gens = all_transpositions(n);
    while (!q.empty()) {
      Permutation p = q.front();
      q.pop();
      for (const auto& t : gens) {
        Permutation next = compose(t.as_permutation(n), p);
        auto r = rank(next);
        if (dist[r] < 0) {
          dist[r] = dist[rank(p)] + 1;
          q.push(next);
        }
      }
    }
    for (const auto& p : all_permutations(n)) ASSERT_EQ(cayley_length(p), dist[rank(p)]) << to_string(p);
  }
}

TEST(LengthDecreasesTest, Examples) {
  EXPECT_TRUE(length_decreases(cyc(3, {{1, 2, 3}}), {1, 2}));
  for (const auto& t : all_transpositions(4)) EXPECT_FALSE(length_decreases(Permutation::identity(4), t));
  const Permutation a = cyc(3, {{1, 2}});
  EXPECT_FALSE(length_decreases(a, {1, 3}));
  EXPECT_EQ(cayley_length(compose(Transposition(1, 3).as_permutation(3), a)), cayley_length(a) + 1);
}

TEST(LengthDecreasesTest, BothSidesExhaustiveUpToN5) {
  for (int n = 2; n <= 5; ++n) {
    for (const auto& p : all_permutations(n)) {
      for (const auto& t : all_transpositions(n)) {
        const int base = cayley_length(p);
        const int left = cayley_length(compose(t.as_permutation(n), p));
        const int right = cayley_length(compose(p, t.as_permutation(n)));
        ASSERT_EQ(std::abs(left - base), 1);
        ASSERT_EQ(left, right);
        ASSERT_EQ(left < base, length_decreases(p, t));
      }
    }
  }
}

TEST(SerializationTest, OneLineAndRank) {
  const Permutation p({2, 1, 3});
  EXPECT_EQ(to_string(p), "[2,1,3]");
  EXPECT_EQ(parse_permutation("[2,1,3]"), p);
  EXPECT_EQ(parse_permutation("2 1 3"), p);
  auto all = all_permutations(5);
  for (std::size_t k = 0; k < all.size(); ++k) {
    ASSERT_EQ(rank(all[k]), k);
    ASSERT_EQ(unrank(5, k), all[k]);
  }
}

}  // namespace
}  // namespace mutime
