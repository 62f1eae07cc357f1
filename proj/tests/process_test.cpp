#include "mutime/process.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <map>

namespace mutime {
namespace {

std::vector<ProcessSpec> small_specs() {
  return {ProcessSpec(Family::kWash1d, 3),
          ProcessSpec(Family::kWash1d, 4),
          ProcessSpec(Family::kWash1dLong, 3, Rational(1, 2)),
          ProcessSpec(Family::kWash1dLong, 4, Rational(1, 3)),
          ProcessSpec(Family::kWashGrid, 3, Rational(1, 2), 2),
          ProcessSpec(Family::kAdjTransposition, 4),
          ProcessSpec(Family::kCycleTransposition, 4),
          ProcessSpec(Family::kRandomToRandom, 4),
          ProcessSpec(Family::kRandomToTop, 4)};
}

TEST(CanonicalStartTest, Examples) {
  auto w = canonical_start(ProcessSpec(Family::kWash1d, 3));
  EXPECT_EQ(piles(std::get<Placement>(w)), (std::vector<std::vector<int>>{{1}, {2}, {3}}));
  EXPECT_EQ(std::get<Permutation>(canonical_start(ProcessSpec(Family::kAdjTransposition, 4))), Permutation::identity(4));
  ProcessSpec grid(Family::kWashGrid, 3, Rational(1, 2), 2);
  auto g = std::get<Placement>(canonical_start(grid));
  // Vertices (1,1),(1,2),(1,3) in 1-based coordinates are row-major indices 0,1,2.
  EXPECT_EQ(g.vertex, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(grid.vertices(), 9);
  EXPECT_EQ(grid_neighbors(grid, 0), (std::vector<int>{1, 3}));
  EXPECT_EQ(grid_neighbors(grid, 4), (std::vector<int>{1, 3, 5, 7}));
}

TEST(ProjectTest, Examples) {
  ProcessSpec spec(Family::kWash1d, 3);
  Placement pl{{0, 0, 2}};
  EXPECT_EQ(project(spec, pl, Collection{{{2, 1}, {3}}}), Permutation({2, 1, 3}));
  EXPECT_EQ(project(spec, canonical_start(spec)), Permutation::identity(3));
  EXPECT_THROW(project(spec, pl, Collection{{{2, 3}, {1}}}), std::invalid_argument);
  ProcessSpec line(Family::kWashGrid, 3, Rational(1, 2), 1);
  for (const auto& c : enumerate_collections(pl)) EXPECT_EQ(project(line, pl, c), project(spec, pl, c));
}

TEST(CollectionTest, UniformWithinPiles) {
  Placement pl{{1, 1, 1, 0}};
  auto all = enumerate_collections(pl);
  ASSERT_EQ(all.size(), 6u);
  Rational total = 0;
  for (const auto& c : all) total += collection_probability(c);
  EXPECT_EQ(total, 1);
  Rng rng(5);
  std::map<Collection, int> counts;
  for (int k = 0; k < 60000; ++k) ++counts[sample_collection(pl, rng)];
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [c, k] : counts) EXPECT_NEAR(k / 60000.0, 1.0 / 6, 0.01);
}

TEST(StepTest, WashBoundaryHoldsAndSharesPile) {
  ProcessSpec spec(Family::kWash1d, 3);
  auto s = canonical_start(spec);
  auto r = replay_step(spec, s, WashMove{1, -1});
  EXPECT_EQ(r.next, s);
  EXPECT_TRUE(r.events.empty());
  EXPECT_EQ(record_probability(spec, s, WashMove{1, -1}), Rational(1, 12));
  auto r2 = replay_step(spec, s, WashMove{2, -1});
  EXPECT_EQ(std::get<Placement>(r2.next).vertex, (std::vector<int>{0, 0, 2}));
  ASSERT_EQ(r2.events.size(), 1u);
  EXPECT_EQ(r2.events[0].pair, Transposition(1, 2));
  EXPECT_EQ(r2.events[0].kind, EventKind::kSamePile);
  EXPECT_THROW(replay_step(spec, s, WashMove{2, 2}), RecordImpossible);
  EXPECT_THROW(replay_step(spec, s, AdjacentSwap{1, true}), RecordImpossible);
}

TEST(StepTest, RandomToRandomBottomInsertHasNoEvent) {
  ProcessSpec spec(Family::kRandomToRandom, 3);
  auto r = replay_step(spec, canonical_start(spec), RemoveInsert{1, 3});
  EXPECT_EQ(std::get<Permutation>(r.next), Permutation({2, 3, 1}));
  EXPECT_TRUE(r.events.empty());
  auto r2 = replay_step(spec, canonical_start(spec), RemoveInsert{1, 2});
  EXPECT_EQ(std::get<Permutation>(r2.next), Permutation({2, 1, 3}));
  ASSERT_EQ(r2.events.size(), 1u);
  EXPECT_EQ(r2.events[0].pair, Transposition(1, 3));
}

TEST(StepTest, CycleTranspositionIdentityEmitsTopTwo) {
  ProcessSpec spec(Family::kCycleTransposition, 3);
  Permutation x({3, 1, 2});
  auto r = replay_step(spec, x, GeneratorMove{Generator::kIdentity});
  EXPECT_EQ(std::get<Permutation>(r.next), x);
  ASSERT_EQ(r.events.size(), 1u);
  EXPECT_EQ(r.events[0].pair, Transposition(1, 3));
  EXPECT_EQ(r.events[0].kind, EventKind::kTopTwo);
  EXPECT_EQ(std::get<Permutation>(replay_step(spec, x, GeneratorMove{Generator::kTopSwap}).next), Permutation({1, 3, 2}));
  EXPECT_EQ(std::get<Permutation>(replay_step(spec, x, GeneratorMove{Generator::kCycle}).next), Permutation({1, 2, 3}));
  EXPECT_TRUE(replay_step(spec, x, GeneratorMove{Generator::kCycle}).events.empty());
}

TEST(StepTest, SweepWithZeroDisplacementIsStill) {
  ProcessSpec spec(Family::kWash1dLong, 4, Rational(1, 3));
  auto s = canonical_start(spec);
  auto r = replay_step(spec, s, SweepMove{{0, 0, 0, 0}, {0, 0, 0, 0}});
  EXPECT_EQ(r.next, s);
  EXPECT_TRUE(r.events.empty());
  EXPECT_EQ(record_probability(spec, s, SweepMove{{0, 0, 0, 0}, {0, 0, 0, 0}}),
            pow(Rational(1, 3), 6));  // the end cards cannot move outward: stopped mass 1
}

TEST(StepTest, SweepOvertakeAndStop) {
  ProcessSpec spec(Family::kWash1dLong, 3, Rational(1, 2));
  auto s = canonical_start(spec);       // cards at 0,1,2
  SweepMove m{{2, 0, 0}, {0, 0, 0}};     // card 1 runs into the right end
  auto r = replay_step(spec, s, m);
  EXPECT_EQ(std::get<Placement>(r.next).vertex, (std::vector<int>{2, 1, 2}));
  // Two overtakes in the right sweep, then the shared pile.
  ASSERT_EQ(r.events.size(), 3u);
  EXPECT_EQ(r.events[0].phase, Phase::kRightSweep);
  EXPECT_EQ(r.events[0].pair, Transposition(1, 2));
  EXPECT_EQ(r.events[1].pair, Transposition(1, 3));
  EXPECT_EQ(r.events[2].kind, EventKind::kSamePile);
  EXPECT_EQ(record_probability(spec, s, m), Rational(1, 4) * Rational(1, 2) * 1 * (Rational(1, 2) * Rational(1, 2) * Rational(1, 2)));
  EXPECT_EQ(record_probability(spec, s, SweepMove{{3, 0, 0}, {0, 0, 0}}), 0);
}

TEST(EnumerateTest, Normalized) {
  for (const auto& spec : small_specs()) {
    std::vector<ProcessState> starts{canonical_start(spec)};
    Rng rng(11);
    auto s = starts[0];
    for (int k = 0; k < 5; ++k) starts.push_back(s = sample_step(spec, s, rng).next);
    for (const auto& x : starts) {
      Rational total = 0;
      for (const auto& t : enumerate_transitions(spec, x)) {
        EXPECT_GT(t.probability, 0);
        total += t.probability;
      }
      EXPECT_EQ(total, 1) << family_name(spec.family);
    }
  }
  ProcessSpec w2(Family::kWash1d, 2);
  EXPECT_EQ(enumerate_transitions(w2, canonical_start(w2)).size(), 6u);
}

TEST(EnumerateTest, AdjacentLazyMass) {
  ProcessSpec spec(Family::kAdjTransposition, 3);
  std::map<Permutation, Rational> law;
  for (const auto& t : enumerate_transitions(spec, canonical_start(spec))) law[std::get<Permutation>(t.next)] += t.probability;
  EXPECT_EQ(law[Permutation::identity(3)], Rational(1, 2));
  EXPECT_EQ(law[Permutation({2, 1, 3})], Rational(1, 4));
  EXPECT_EQ(law[Permutation({1, 3, 2})], Rational(1, 4));
  ProcessSpec top(Family::kRandomToTop, 3);
  auto ts = enumerate_transitions(top, canonical_start(top));
  ASSERT_EQ(ts.size(), 3u);
  for (const auto& t : ts) EXPECT_EQ(t.probability, Rational(1, 3));
}

TEST(EnumerateTest, GuardRefusesHugeSweeps) {
  ProcessSpec spec(Family::kWash1dLong, 12, Rational(1, 2));
  EXPECT_THROW(enumerate_transitions(spec, canonical_start(spec), 1000), EnumerationGuard);
}

// Sampling frequencies follow the closed-form record probabilities.
TEST(SampleTest, FrequenciesMatchRecordProbabilities) {
  for (const auto& spec : {ProcessSpec(Family::kWash1dLong, 3, Rational(1, 3)), ProcessSpec(Family::kWashGrid, 2, Rational(1, 2), 2),
                           ProcessSpec(Family::kRandomToRandom, 3)}) {
    auto x = canonical_start(spec);
    Rng rng(3);
    std::map<StepRecord, int> counts;
    const int draws = 200000;
    for (int k = 0; k < draws; ++k) ++counts[sample_record(spec, x, rng)];
    for (const auto& t : enumerate_transitions(spec, x)) {
      const double expect = to_double(t.probability);
      EXPECT_NEAR(counts[t.record] / static_cast<double>(draws), expect, 4 * std::sqrt(expect / draws) + 1e-4)
          << family_name(spec.family) << " " << to_string(t.record);
    }
  }
}

TEST(SampleTest, ReplayAgreesAndConservesLabels) {
  for (const auto& spec : small_specs()) {
    Rng rng(derive_seed(42, 0, static_cast<std::uint64_t>(spec.family)));
    auto x = canonical_start(spec);
    for (int k = 1; k <= 100000 / 9; ++k) {
      auto s = sample_step(spec, x, rng, k);
      auto r = replay_step(spec, x, s.record, k);
      ASSERT_EQ(r.next, s.next);
      ASSERT_EQ(r.events, s.events);
      if (const auto* pl = std::get_if<Placement>(&s.next)) {
        for (int v : pl->vertex) ASSERT_TRUE(v >= 0 && v < spec.vertices());
      }
      x = s.next;
    }
  }
}

}  // namespace
}  // namespace mutime
