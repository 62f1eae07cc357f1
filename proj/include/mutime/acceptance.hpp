#pragma once

// The twelve acceptance criteria with pinned sizes, seeds and brackets. Used
// by `mutime suite` and the acceptance test binary.

#include "mutime/checks.hpp"
#include "mutime/experiments.hpp"
#include "mutime/wash_ordered.hpp"

#include <deque>
#include <functional>
#include <iostream>

namespace mutime {

inline constexpr std::uint64_t kSuiteSeed = 20240611;

struct AcceptanceConfig {
  std::uint64_t seed = kSuiteSeed;
  std::size_t scaling_replicas = 1000;
  std::vector<int> scaling_n = {8, 16, 32, 64};
  std::size_t spanning_seeds = 10000;
  std::optional<std::string> out_dir;  // CSV/JSON copies of the Monte Carlo outputs
};

// Brackets and bands, pinned.
inline constexpr double kCubicLo = 2.6, kCubicHi = 3.4;
inline constexpr double kQuadLo = 1.6, kQuadHi = 2.4;
inline constexpr double kCombiningBand = 4.0;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;
};

namespace detail {

// Breadth-first distances from the identity in the Cayley graph generated by
// all transpositions, indexed by rank.
inline std::vector<int> cayley_bfs(int n) {
  const auto nf = factorial(n);
  std::vector<int> dist(nf, -1);
  std::deque<Permutation> queue{Permutation::identity(n)};
  dist[rank(queue.front())] = 0;
  const auto gens = all_transpositions(n);
  while (!queue.empty()) {
    auto p = queue.front();
    queue.pop_front();
    const int d = dist[rank(p)];
    for (const auto& t : gens) {
      auto q = compose(p, t.as_permutation(n));
      auto& slot = dist[rank(q)];
      if (slot < 0) {
        slot = d + 1;
        queue.push_back(std::move(q));
      }
    }
  }
  return dist;
}

inline int shuffle_index(Rng& rng, int hi) { return uniform_int(rng, 0, hi); }

inline CriterionResult c1_cayley() {
  std::size_t checked = 0, bad = 0;
  for (int n = 1; n <= 6; ++n) {
    const auto dist = cayley_bfs(n);
    for (const auto& pi : all_permutations(n)) {
      ++checked;
      bad += cayley_length(pi) != dist[rank(pi)];
    }
  }
  return {1, "Cayley length equals BFS distance, n <= 6", bad == 0,
          std::to_string(checked) + " permutations, " + std::to_string(bad) + " mismatches"};
}

inline CriterionResult c2_greedy(std::uint64_t seed) {
  std::size_t checked = 0, bad = 0;
  for (int n = 2; n <= 5; ++n) {
    const auto perms = all_permutations(n);
    for (int k = 0; k < 100; ++k) {
      Rng rng = make_stream(seed, 200 + n, k);
      auto seq = all_transpositions(n);
      for (int i = static_cast<int>(seq.size()) - 1; i > 0; --i) std::swap(seq[i], seq[shuffle_index(rng, i)]);
      const TranspositionSequence s(n, seq);
      for (const auto& pi : perms) {
        ++checked;
        bad += evaluate_subsequence(s, greedy_subsequence_factor(s, pi)) != pi;
      }
    }
  }
  return {2, "greedy subsequence reproduces every permutation, n <= 5", bad == 0,
          std::to_string(checked) + " (ordering, permutation) cases, " + std::to_string(bad) + " failures"};
}

inline CriterionResult c3_counterexample() {
  const auto d = conditioned_distribution(ProcessSpec(Family::kWash1d, 3), 3, StoppingKind::kAllPairs);
  Rational lo = 1, hi = 0;
  for (const auto& [pi, q] : d.law) {
    lo = std::min<Rational>(lo, q);
    hi = std::max<Rational>(hi, q);
  }
  return {3, "conditioning on all pairs met is nonuniform, wash1d n=3 t=3", hi > lo,
          "min " + to_string(lo) + ", max " + to_string(hi) + ", mass " + to_string(d.mass)};
}

inline CriterionResult c4_pair_swap() {
  std::size_t cases = 0, bad = 0;
  auto run = [&](int n, int t_max) {
    const ProcessSpec spec(Family::kWash1d, n);
    for (int t = 0; t <= t_max; ++t)
      for (const auto& pr : all_transpositions(n)) {
        ++cases;
        bad += !verify_pair_swap_bijection(spec, t, pr.i, pr.j).ok();
      }
  };
  run(3, 4);
  run(2, 6);
  return {4, "pair swap balances end masses, wash1d n=3 t<=4 and n=2 t<=6", bad == 0,
          std::to_string(cases) + " (t, pair) cases, " + std::to_string(bad) + " unbalanced"};
}

inline CriterionResult c5_mutation_bound() {
  auto wash = verify_mutation_bound(ProcessSpec(Family::kWash1d, 3), t_range(0, 8));
  auto cycle = verify_mutation_bound(ProcessSpec(Family::kCycleTransposition, 3), t_range(0, 12));
  const auto& w8 = wash.rows.back();
  const auto& c12 = cycle.rows.back();
  return {5, "sep(t) <= P(T > t), wash1d n=3 t<=8 and cycle n=3 t<=12", wash.holds() && cycle.holds(),
          "wash1d t=8 sep " + fmt_double(to_double(w8.sep)) + " <= " + fmt_double(to_double(w8.tail)) +
              "; cycle t=12 sep " + fmt_double(to_double(c12.sep)) + " <= " + fmt_double(to_double(c12.tail))};
}

inline CriterionResult c6_mutation_maps() {
  struct Case {
    ProcessSpec spec;
    int t;
    MutationRule rule;
  };
  const ProcessSpec wash(Family::kWash1d, 3), cycle(Family::kCycleTransposition, 3);
  std::vector<Case> cases = {{wash, 4, MutationRule::kFast}, {cycle, 4, MutationRule::kFast},
                             {cycle, 5, MutationRule::kFast}, {cycle, 6, MutationRule::kFast}};
  for (const auto& spec : {wash, cycle}) {
    auto t = smallest_satisfying_t(spec, StoppingKind::kSequential, 12);
    if (!t) return {6, "mutation maps", false, "no sequential-rule mass for " + family_name(spec.family) + " up to t=12"};
    cases.push_back({spec, *t, MutationRule::kSlow});
  }
  bool ok = true;
  std::string detail;
  for (const auto& c : cases) {
    const auto r = verify_mutation(c.spec, c.t, c.rule);
    ok = ok && r.ok();
    if (!detail.empty()) detail += "; ";
    detail += family_name(c.spec.family) + " t=" + std::to_string(c.t) + " " + r.rule + ": " +
              std::to_string(r.paths_satisfying) + " paths, " +
              std::to_string(r.roundtrip_failures + r.end_mismatch + r.prob_mismatch + r.injectivity_failures +
                             r.count_inequality_failures + r.contract_violations) +
              " failures";
  }
  return {6, "mutation maps hit the target, keep probability and invert", ok, detail};
}

inline ProcessSpec suite_spec(Family f, int n) {
  return f == Family::kWash1dLong ? ProcessSpec(f, n, Rational(1, 2)) : ProcessSpec(f, n);
}

inline CriterionResult c7_fair() {
  std::string unfair;
  std::size_t states = 0;
  for (auto f : all_families()) {
    const auto rep = check_fair(suite_spec(f, 3));
    states += rep.states_checked;
    if (!rep.fair) unfair += family_name(f) + " ";
  }
  return {7, "all seven families are fair at n=3", unfair.empty(),
          unfair.empty() ? std::to_string(states) + " states checked exactly" : "unfair: " + unfair};
}

inline CriterionResult c8_detectors() {
  std::size_t events = 0, violations = 0;
  for (auto f : all_families()) {
    const auto rep = check_detectors(suite_spec(f, 3));
    events += rep.events;
    violations += rep.violations;
  }
  return {8, "every emitted interaction event is sound, n=3", violations == 0,
          std::to_string(events) + " events, " + std::to_string(violations) + " violations"};
}

inline CriterionResult c9_jumble() {
  bool ok = true;
  std::string detail;
  for (const auto& p : {Rational(1, 2), Rational(1, 3)}) {
    const ProcessSpec spec(Family::kWash1dLong, 3, p);
    for (int t = 0; t <= 2; ++t) {
      const auto riffle = ordered_law(spec, t, MergeRule::kRiffle);
      const auto insert = ordered_law(spec, t, MergeRule::kInsertion);
      const bool same = riffle == insert;
      const auto jr = check_piles_jumbled(riffle);
      ok = ok && same && jr.jumbled;
      if (!same) detail += "riffle != insertion at p=" + to_string(p) + " t=" + std::to_string(t) + "; ";
    }
  }
  const auto w = check_piles_jumbled(ordered_law(ProcessSpec(Family::kWash1d, 3), 5));
  ok = ok && w.jumbled;
  if (detail.empty()) detail = "merge rules agree for p in {1/2, 1/3}, t<=2; piles jumbled";
  return {9, "riffle and insertion merges agree; piles jumbled", ok, detail};
}

inline std::optional<std::ofstream> open_out(const AcceptanceConfig& cfg, const std::string& name) {
  if (!cfg.out_dir) return std::nullopt;
  std::filesystem::create_directories(*cfg.out_dir);
  return std::ofstream(std::filesystem::path(*cfg.out_dir) / name, std::ios::binary);
}

struct ScalingRun {
  std::string label;
  ScalingSeries series;
  ScalingFit fit;
  std::vector<CombiningRow> rows;
};

inline ScalingRun scaling_run(const std::string& label, ProcessSpec spec, const AcceptanceConfig& cfg) {
  ScalingRun run{label, {}, {}, {}};
  for (int n : cfg.scaling_n) {
    spec.n = n;
    spec.validate();
    auto row = combining_row(spec, cfg.scaling_replicas, cfg.seed);
    double var = 0;
    for (double v : row.replica_pair_means) var += (v - row.pair_mean_time) * (v - row.pair_mean_time);
    var /= static_cast<double>(cfg.scaling_replicas - 1);
    run.series.points.push_back({n, row.pair_mean_time, std::sqrt(var / static_cast<double>(cfg.scaling_replicas))});
    row.replica_pair_means.clear();
    row.all_pairs_times.clear();
    run.rows.push_back(std::move(row));
  }
  run.fit = scaling_fit(run.series);
  return run;
}

inline CriterionResult c10_scaling(const std::vector<ScalingRun>& runs, const AcceptanceConfig& cfg) {
  bool ok = true;
  std::string detail;
  for (const auto& r : runs) {
    const bool quad = r.label == "random-to-random";
    const double lo = quad ? kQuadLo : kCubicLo, hi = quad ? kQuadHi : kCubicHi;
    const bool in = r.fit.exponent >= lo && r.fit.exponent <= hi;
    ok = ok && in;
    if (!detail.empty()) detail += "; ";
    detail += r.label + " " + fmt_double(std::round(r.fit.exponent * 1000) / 1000) + (in ? " in " : " NOT in ") + "[" +
              fmt_double(lo) + "," + fmt_double(hi) + "]";
    if (auto os = open_out(cfg, "scaling_" + r.label + ".csv")) {
      Table t{"scaling", {"n", "stat", "stderr"}, {}};
      for (const auto& p : r.series.points)
        t.rows.push_back({std::to_string(p.n), fmt_double(p.statistic), fmt_double(p.stderr_)});
      *os << to_csv(t);
    }
  }
  return {10, "per-pair interaction time exponents inside brackets", ok, detail};
}

inline CriterionResult c11_combining(const ScalingRun& wash, const AcceptanceConfig& cfg) {
  double lo = 1e300, hi = 0;
  std::string ratios;
  for (const auto& r : wash.rows) {
    lo = std::min(lo, r.ratio);
    hi = std::max(hi, r.ratio);
    ratios += (ratios.empty() ? "" : " ") + fmt_double(std::round(r.ratio * 1000) / 1000);
  }
  if (auto os = open_out(cfg, "combining_wash1d.csv")) {
    Table t{"combining", {"n", "pair_mean_time", "all_pairs_median", "ratio"}, {}};
    for (const auto& r : wash.rows)
      t.rows.push_back({std::to_string(r.n), fmt_double(r.pair_mean_time), fmt_double(r.all_pairs_median),
                        fmt_double(r.ratio)});
    *os << to_csv(t);
  }
  const bool ok = lo > 0 && hi / lo <= kCombiningBand;
  return {11, "all-pairs median over (pair mean x log pairs) stays in a 4x band", ok,
          "ratios " + ratios + ", spread " + fmt_double(std::round(hi / lo * 1000) / 1000)};
}

inline CriterionResult c12_spanning(const AcceptanceConfig& cfg) {
  ExperimentConfig c;
  c.subcommand = "spanning";
  c.n_list = {4, 5};
  c.replicas = cfg.spanning_seeds;
  c.seed = cfg.seed;
  const auto a = run_experiment(c), b = run_experiment(c);
  const auto text = to_csv(a.tables[0]);
  const bool ok = text == to_csv(b.tables[0]) && a.tables[0].rows.size() == 2 * cfg.spanning_seeds;
  if (auto os = open_out(cfg, "spanning.csv")) *os << text;
  std::string detail = std::to_string(a.tables[0].rows.size()) + " rows, repeat run identical";
  for (const auto& s : a.report["summary"])
    detail += "; n=" + std::to_string(s["n"].get<int>()) + " mean prefix " +
              fmt_double(std::round(s["mean_min_spanning_prefix"].get<double>() * 100) / 100) + " vs coupon " +
              fmt_double(std::round(s["mean_coupon_collector_steps"].get<double>() * 100) / 100);
  return {12, "spanning prefix vs coupon collector emitted deterministically", ok, detail};
}

template <class F>
CriterionResult timed(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = f();
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace detail

inline std::string format_line(const CriterionResult& r) {
  std::ostringstream os;
  os << (r.passed ? "PASS" : "FAIL") << "  [" << (r.id < 10 ? " " : "") << r.id << "] " << r.name << " | " << r.detail
     << " | " << std::fixed;
  os.precision(1);
  os << r.seconds << "s";
  return os.str();
}

// Runs every criterion in order, printing each line as it finishes.
inline std::vector<CriterionResult> run_acceptance(const AcceptanceConfig& cfg, std::ostream* live = &std::cout) {
  using namespace detail;
  std::vector<CriterionResult> out;
  auto add = [&](int id, const std::string& name, const std::function<CriterionResult()>& f) {
    auto r = timed(f);
    r.id = id;
    if (r.name.empty()) r.name = name;
    if (live) *live << format_line(r) << std::endl;
    out.push_back(std::move(r));
  };
  add(1, "Cayley length", c1_cayley);
  add(2, "greedy completeness", [&] { return c2_greedy(cfg.seed); });
  add(3, "counterexample", c3_counterexample);
  add(4, "pair swap", c4_pair_swap);
  add(5, "mutation bound", c5_mutation_bound);
  add(6, "mutation maps", c6_mutation_maps);
  add(7, "fairness", c7_fair);
  add(8, "detector soundness", c8_detectors);
  add(9, "wash jumble", c9_jumble);

  std::vector<ScalingRun> runs;
  add(10, "scaling exponents", [&] {
    runs.push_back(scaling_run("wash1d", ProcessSpec(Family::kWash1d, 2), cfg));
    runs.push_back(scaling_run("adj-transposition", ProcessSpec(Family::kAdjTransposition, 2), cfg));
    runs.push_back(scaling_run("random-to-random", ProcessSpec(Family::kRandomToRandom, 2), cfg));
    runs.push_back(scaling_run("wash-grid-d1", ProcessSpec(Family::kWashGrid, 2, Rational(1, 2), 1), cfg));
    return c10_scaling(runs, cfg);
  });
  add(11, "combining band", [&] {
    if (runs.empty()) throw std::runtime_error("scaling runs unavailable");
    return c11_combining(runs.front(), cfg);
  });
  add(12, "spanning experiment", [&] { return c12_spanning(cfg); });
  return out;
}

}  // namespace mutime
