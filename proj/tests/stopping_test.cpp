#include "mutime/stopping.hpp"

#include <gtest/gtest.h>

namespace mutime {
namespace {

InteractionEvent ev(int i, int j, int t) { return {t, Phase::kStep, {i, j}, EventKind::kSamePile}; }

TEST(TrackTest, LatestWins) {
  InteractionMatrix m(3);
  m.track({});
  EXPECT_FALSE(m.last_time(1, 2).has_value());
  m.track({ev(1, 2, 2)});
  EXPECT_EQ(m.last_time(2, 1), 2);
  m.track({ev(1, 2, 5)});
  EXPECT_EQ(m.last_time(1, 2), 5);
  EXPECT_THROW(m.track({ev(1, 4, 6)}), std::out_of_range);
}

TEST(AllPairsTest, Examples) {
  EXPECT_EQ(all_pairs_time({ev(1, 2, 1), ev(1, 3, 2), ev(2, 3, 5)}, 3).time, 5);
  auto missing = all_pairs_time({ev(1, 2, 1), ev(1, 3, 2)}, 3);
  EXPECT_FALSE(missing.achieved);
  EXPECT_FALSE(missing.time.has_value());
  EXPECT_EQ(all_pairs_time({ev(1, 2, 3)}, 2).time, 3);
}

TEST(SequentialTest, Examples) {
  auto two = sequential_times({ev(1, 2, 2), ev(1, 2, 7)}, 2);
  EXPECT_TRUE(two.achieved);
  EXPECT_EQ(two.sequential_times, (std::vector<std::optional<int>>{0, 2, 7}));
  auto one = sequential_times({ev(1, 2, 2)}, 2);
  EXPECT_FALSE(one.achieved);
  EXPECT_EQ(one.sequential_times, (std::vector<std::optional<int>>{0, 2, std::nullopt}));
  // Window walk by hand: T1 = 2 from {1,2}@1 and {1,3}@2; {2,3}@2 sits on the
  // boundary, so window 2 needs {2,3}@4; window 3 closes with {2,3}@6.
  auto three = sequential_times({ev(1, 2, 1), ev(1, 3, 2), ev(2, 3, 2), ev(1, 2, 3), ev(2, 3, 4), ev(1, 3, 5),
                                 ev(2, 3, 6), ev(1, 3, 7)},
                                3);
  EXPECT_EQ(three.sequential_times, (std::vector<std::optional<int>>{0, 2, 4, 6}));
}

// Independent statement of the window rule, by scanning every candidate time.
std::optional<int> reference_sequential(const std::vector<InteractionEvent>& trace, int n) {
  int prev = 0;
  int horizon = 0;
  for (const auto& e : trace) horizon = std::max(horizon, e.time);
  for (int i = 1; i <= n; ++i) {
    std::optional<int> found;
    for (int t = prev + 1; t <= horizon && !found; ++t) {
      bool all = true;
      for (int j = 1; j <= n && all; ++j) {
        if (j == i) continue;
        bool met = false;
        for (const auto& e : trace)
          met |= e.time > prev && e.time <= t && e.pair == Transposition(std::min(i, j), std::max(i, j));
        all = met;
      }
      if (all) found = t;
    }
    if (n == 1) found = 0;
    if (!found) return std::nullopt;
    prev = *found;
  }
  return prev;
}

std::vector<std::vector<InteractionEvent>> random_traces(int n, int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<InteractionEvent>> out;
  for (int c = 0; c < count; ++c) {
    std::vector<InteractionEvent> trace;
    const int len = uniform_int(rng, 1, 40);
    for (int t = 1; t <= len; ++t) {
      const int k = uniform_int(rng, 0, 2);
      for (int e = 0; e < k; ++e) {
        int a = uniform_int(rng, 1, n), b = uniform_int(rng, 1, n - 1);
        if (b >= a) ++b;
        trace.push_back(ev(std::min(a, b), std::max(a, b), t));
      }
    }
    out.push_back(std::move(trace));
  }
  return out;
}

TEST(SequentialTest, MatchesReferenceAndTracker) {
  for (int n = 2; n <= 4; ++n) {
    for (const auto& trace : random_traces(n, 2000, 100 + n)) {
      auto rep = sequential_times(trace, n);
      auto ref = reference_sequential(trace, n);
      ASSERT_EQ(rep.time, ref);
      StoppingTracker tr(StoppingKind::kSequential, n), ta(StoppingKind::kAllPairs, n);
      int horizon = trace.empty() ? 0 : trace.back().time;
      for (int t = 1; t <= horizon; ++t) {
        std::vector<InteractionEvent> step;
        for (const auto& e : trace)
          if (e.time == t) step.push_back(e);
        tr.observe(step, t);
        ta.observe(step, t);
      }
      ASSERT_EQ(tr.time(), rep.time);
      ASSERT_EQ(ta.time(), all_pairs_time(trace, n).time);
    }
  }
}

TEST(SequentialTest, DominatesAllPairs) {
  for (const auto& trace : random_traces(4, 10000, 9)) {
    auto seq = sequential_times(trace, 4);
    auto all = all_pairs_time(trace, 4);
    if (seq.achieved) {
      ASSERT_TRUE(all.achieved);
      ASSERT_GE(*seq.time, *all.time);
      for (std::size_t k = 1; k < seq.sequential_times.size(); ++k)
        ASSERT_LT(*seq.sequential_times[k - 1], *seq.sequential_times[k]);
    }
    if (all.achieved) {
      // Equal to the maximum of the per-pair first times.
      int mx = 0;
      for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j) {
          int first = 1 << 30;
          for (const auto& e : trace)
            if (e.pair == Transposition(i, j)) first = std::min(first, e.time);
          ASSERT_LE(first, *all.time);
          mx = std::max(mx, first);
        }
      ASSERT_EQ(mx, *all.time);
    }
  }
}

TEST(TailEstimateTest, Basics) {
  ProcessSpec spec(Family::kWash1d, 3);
  auto zero = tail_estimate(spec, StoppingKind::kAllPairs, 0, 200, 1);
  EXPECT_EQ(zero.estimate, 1.0);
  auto late = tail_estimate(spec, StoppingKind::kAllPairs, 400, 2000, 2);
  EXPECT_LT(late.ci.hi, 0.05);
  auto a = tail_estimates(spec, StoppingKind::kSequential, {5, 20, 80}, 300, 77);
  auto b = tail_estimates(spec, StoppingKind::kSequential, {5, 20, 80}, 300, 77);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].exceed, b[k].exceed);
    EXPECT_EQ(a[k].ci.lo, b[k].ci.lo);
    if (k) {
      EXPECT_LE(a[k].exceed, a[k - 1].exceed);
    }
  }
}

TEST(WilsonTest, KnownValues) {
  auto ci = wilson_interval(50, 100);
  EXPECT_NEAR(ci.lo, 0.4038, 1e-4);
  EXPECT_NEAR(ci.hi, 0.5962, 1e-4);
  auto edge = wilson_interval(0, 10);
  EXPECT_EQ(edge.lo, 0.0);
  EXPECT_NEAR(edge.hi, 0.2775, 1e-4);
}

TEST(FirstMeetingsTest, FastSimulatorsMatchGeneric) {
  for (const auto& spec : {ProcessSpec(Family::kWash1d, 5), ProcessSpec(Family::kWashGrid, 5, Rational(1, 2), 1),
                           ProcessSpec(Family::kAdjTransposition, 5), ProcessSpec(Family::kCycleTransposition, 4),
                           ProcessSpec(Family::kRandomToRandom, 6)}) {
    for (std::uint64_t r = 0; r < 30; ++r) {
      Rng a = make_stream(5, 1, r), b = make_stream(5, 1, r);
      auto fast = first_meetings(spec, a, 1 << 22);
      auto slow = generic_first_meetings(spec, b, 1 << 22);
      ASSERT_EQ(fast.first, slow.first) << family_name(spec.family);
      ASSERT_EQ(fast.all_pairs, slow.all_pairs);
      ASSERT_TRUE(fast.all_pairs.has_value());
    }
  }
}

TEST(CombiningTest, SmallAndSynthetic) {
  auto rows = combining_report(ProcessSpec(Family::kWash1d, 2), {2, 4}, 200, 3);
  ASSERT_EQ(rows.size(), 2u);
  // One pair: the all-pairs time is the pair time, and log k + 1 = 1.
  EXPECT_NEAR(rows[0].ratio, rows[0].all_pairs_median / rows[0].pair_mean_time, 1e-12);
  EXPECT_GT(rows[1].ratio, 0);
  EXPECT_NEAR(synthetic_combining_ratio(2016, 10.0, 400, 4), 1.0, 0.15);
}

}  // namespace
}  // namespace mutime
