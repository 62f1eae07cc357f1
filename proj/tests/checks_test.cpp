#include "mutime/checks.hpp"
#include "mutime/wash_ordered.hpp"

#include <gtest/gtest.h>

#include <numeric>

namespace mutime {
namespace {

std::vector<ProcessSpec> n3_specs() {
  return {ProcessSpec(Family::kWash1d, 3),
          ProcessSpec(Family::kWash1dLong, 3, Rational(1, 2)),
          ProcessSpec(Family::kWash1dLong, 3, Rational(1, 3)),
          ProcessSpec(Family::kWashGrid, 3, Rational(1, 2), 1),
          ProcessSpec(Family::kWashGrid, 3, Rational(1, 2), 2),
          ProcessSpec(Family::kAdjTransposition, 3),
          ProcessSpec(Family::kCycleTransposition, 3),
          ProcessSpec(Family::kRandomToRandom, 3),
          ProcessSpec(Family::kRandomToTop, 3)};
}

TEST(FairTest, AllFamiliesAtN3) {
  for (const auto& spec : n3_specs()) {
    auto rep = check_fair(spec);
    EXPECT_TRUE(rep.fair) << family_name(spec.family);
    EXPECT_GT(rep.states_checked, 0u);
  }
}

TEST(FairTest, LabelOneToTopIsUnfair) {
  auto rep = check_fair(label_one_to_top_kernel(), 3, Permutation::identity(3));
  EXPECT_FALSE(rep.fair);
  ASSERT_TRUE(rep.witness.has_value());
  EXPECT_NE(rep.witness->relabelled_step, rep.witness->step_relabelled);
}

TEST(InteractionPairTest, BareStateExamples) {
  ProcessSpec wash(Family::kWash1d, 3);
  Placement x{{0, 1, 2}}, y{{0, 0, 2}};
  auto c = check_interaction_pair(wash, x, y, 1, 2);
  EXPECT_TRUE(c.holds);
  EXPECT_TRUE(c.fixed_by_pair);
  EXPECT_EQ(c.forward, Rational(1, 12));

  ProcessSpec cyc(Family::kCycleTransposition, 3);
  Permutation top({2, 3, 1});
  auto cc = check_interaction_pair(cyc, top, top, 2, 3);
  EXPECT_TRUE(cc.holds);
  EXPECT_EQ(cc.forward, Rational(1, 3));
  EXPECT_EQ(cc.swapped, Rational(1, 3));

  ProcessSpec adj(Family::kAdjTransposition, 3);
  auto ca = check_interaction_pair(adj, Permutation::identity(3), Permutation::identity(3), 1, 2);
  EXPECT_FALSE(ca.holds);
  EXPECT_EQ(ca.forward, Rational(1, 2));
  EXPECT_EQ(ca.swapped, Rational(1, 4));
}

TEST(DetectorTest, ExhaustiveAtN3) {
  for (const auto& spec : n3_specs()) {
    auto rep = check_detectors(spec);
    EXPECT_EQ(rep.violations, 0u) << family_name(spec.family);
    if (spec.family != Family::kRandomToTop) {
      EXPECT_GT(rep.events, 0u) << family_name(spec.family);
    }
  }
}

TEST(DetectorTest, SampledAtN4) {
  for (const auto& spec : {ProcessSpec(Family::kWash1dLong, 4, Rational(1, 2)), ProcessSpec(Family::kAdjTransposition, 4),
                           ProcessSpec(Family::kCycleTransposition, 4), ProcessSpec(Family::kRandomToRandom, 4),
                           ProcessSpec(Family::kWashGrid, 4, Rational(1, 2), 2)}) {
    Rng rng(17);
    auto x = canonical_start(spec);
    for (int k = 1; k <= 300; ++k) {
      auto s = sample_step(spec, x, rng, k);
      for (const auto& e : s.events) {
        auto c = check_event(spec, x, s.record, e);
        ASSERT_TRUE(c.symmetry.holds && c.twin_ok) << family_name(spec.family) << " " << to_string(s.record);
      }
      x = s.next;
    }
  }
}

TEST(DetectorTest, OvertakeTwinSwapsEndpoints) {
  ProcessSpec spec(Family::kWash1dLong, 4, Rational(1, 2));
  Placement x{{0, 2, 3, 3}};
  SweepMove m{{3, 0, 0, 0}, {0, 0, 0, 0}};
  auto events = replay_step(spec, x, m).events;
  ASSERT_FALSE(events.empty());
  EXPECT_EQ(events[0].pair, Transposition(1, 2));
  auto twin = std::get<SweepMove>(twin_record(spec, x, m, events[0]));
  EXPECT_EQ(twin.right, (std::vector<int>{2, 1, 0, 0}));
}

TEST(JumbledTest, Basics) {
  std::map<Permutation, Rational> point{{Permutation::identity(3), 1}};
  EXPECT_TRUE(check_jumbled(point, {1}));
  EXPECT_FALSE(check_jumbled(point, {1, 2}));
  std::map<Permutation, Rational> half{{Permutation::identity(3), Rational(1, 2)}, {Permutation({2, 1, 3}), Rational(1, 2)}};
  EXPECT_TRUE(check_jumbled(half, {1, 2}));
  EXPECT_FALSE(check_jumbled(half, {2, 3}));
}

TEST(OrderedWashTest, SlotExample) {
  auto s = ordered_start(3);
  OrderedWashMove m{2, -1, 0};
  EXPECT_EQ(ordered_move_probability(s, m), Rational(1, 3) * Rational(1, 4) * Rational(1, 2));
  auto t = ordered_apply(s, m);
  EXPECT_EQ(t.piles, (std::vector<std::vector<int>>{{2, 1}, {}, {3}}));
  EXPECT_EQ(ordered_deck(t), Permutation({2, 1, 3}));
  Rational total = 0;
  for (const auto& tr : ordered_wash1d_transitions(t)) total += tr.probability;
  EXPECT_EQ(total, 1);
}

TEST(OrderedWashTest, RiffleMarginal) {
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; a + b <= 6; ++b) {
      std::vector<int> x(a), y(b);
      std::iota(x.begin(), x.end(), 1);
      std::iota(y.begin(), y.end(), 10);
      auto ms = riffle_merges(x, y);
      std::set<std::vector<int>> distinct;
      Rational total = 0;
      for (const auto& [m, p] : ms) {
        distinct.insert(m);
        total += p;
        EXPECT_EQ(p, Rational(static_cast<long long>(factorial(a) * factorial(b)), static_cast<long long>(factorial(a + b))));
      }
      EXPECT_EQ(distinct.size(), ms.size());
      EXPECT_EQ(total, 1);
    }
}

// Position chain plus a uniform order inside each final pile.
std::map<Permutation, Rational> position_deck_law(const ProcessSpec& spec, int t) {
  StateLaw law{{canonical_start(spec), 1}};
  for (int k = 0; k < t; ++k) {
    StateLaw next;
    for (const auto& [x, p] : law)
      for (const auto& tr : enumerate_transitions(spec, x)) next[tr.next] += p * tr.probability;
    law = std::move(next);
  }
  std::map<Permutation, Rational> out;
  for (const auto& [x, p] : law)
    for (const auto& c : enumerate_collections(std::get<Placement>(x)))
      out[project(spec, x, c)] += p * collection_probability(c);
  return out;
}

TEST(OrderedWashTest, RiffleAndInsertionAgree) {
  for (const auto& p : {Rational(1, 2), Rational(1, 3)}) {
    ProcessSpec spec(Family::kWash1dLong, 3, p);
    for (int t = 0; t <= 2; ++t) {
      auto riffle = ordered_law(spec, t, MergeRule::kRiffle);
      auto insert = ordered_law(spec, t, MergeRule::kInsertion);
      EXPECT_EQ(riffle, insert) << "t=" << t;
      Rational total = 0;
      for (const auto& [s, q] : riffle) total += q;
      EXPECT_EQ(total, 1);
      EXPECT_EQ(deck_law(riffle), position_deck_law(spec, t));
    }
  }
}

TEST(OrderedWashTest, Shuffle1DeckLawMatchesPositionChain) {
  ProcessSpec spec(Family::kWash1d, 3);
  for (int t = 0; t <= 5; ++t) EXPECT_EQ(deck_law(ordered_law(spec, t)), position_deck_law(spec, t)) << t;
}

TEST(OrderedWashTest, PilesJumbled) {
  auto r1 = check_piles_jumbled(ordered_law(ProcessSpec(Family::kWash1d, 3), 5));
  EXPECT_TRUE(r1.jumbled);
  EXPECT_GT(r1.piles_checked, 0u);
  auto r2 = check_piles_jumbled(ordered_law(ProcessSpec(Family::kWash1dLong, 3, Rational(1, 2)), 2));
  EXPECT_TRUE(r2.jumbled);
  EXPECT_GT(r2.piles_checked, 0u);
}

}  // namespace
}  // namespace mutime
