#pragma once

// Exact laws on S_n at small n, distances to uniform, the mutation-bound
// check and power-law fits of stopping-time statistics.

#include "mutime/checks.hpp"
#include "mutime/paths.hpp"
#include "mutime/stopping.hpp"

#include <cmath>

namespace mutime {

using ExactDistribution = std::map<Permutation, Rational>;

inline void validate_distribution(const ExactDistribution& d) {
  Rational total = 0;
  for (const auto& [pi, q] : d) {
    if (q < 0) throw std::invalid_argument("negative probability");
    total += q;
  }
  if (total != 1) throw std::invalid_argument("probabilities do not sum to 1");
}

// Law of the projection given the law of the state.
inline ExactDistribution project_law(const ProcessSpec& spec, const StateLaw& states) {
  ExactDistribution out;
  for (const auto& [x, q] : states) {
    if (is_wash(spec.family)) {
      for (const auto& c : enumerate_collections(std::get<Placement>(x)))
        out[project(spec, x, c)] += q * collection_probability(c);
    } else {
      out[project(spec, x, std::nullopt)] += q;
    }
  }
  return out;
}

inline StateLaw evolve(const ProcessSpec& spec, const StateLaw& law, std::size_t guard) {
  StateLaw next;
  for (const auto& [x, q] : law)
    for (const auto& tr : enumerate_transitions(spec, x)) next[tr.next] += q * tr.probability;
  if (next.size() > guard) throw EnumerationGuard("state space exceeds guard");
  return next;
}

inline ExactDistribution exact_distribution(const ProcessSpec& spec, int t, std::size_t guard = 2'000'000) {
  if (t < 0) throw std::invalid_argument("t must be nonnegative");
  StateLaw law{{canonical_start(spec), 1}};
  for (int s = 0; s < t; ++s) law = evolve(spec, law, guard);
  return project_law(spec, law);
}

// Independent backend: sum over every path.
inline ExactDistribution path_distribution(const ProcessSpec& spec, int t, std::size_t guard = 5'000'000) {
  ExactDistribution out;
  for_each_path(spec, t, [&](const Path& p, const Rational& q) { out[end_permutation(p)] += q; }, guard);
  return out;
}

inline Rational law_at(const ExactDistribution& d, const Permutation& pi) {
  auto it = d.find(pi);
  return it == d.end() ? Rational(0) : it->second;
}

inline Rational separation_distance(const ExactDistribution& d, int n) {
  const Rational nf = static_cast<long long>(factorial(n));
  Rational worst = 0;
  for (const auto& pi : all_permutations(n)) {
    Rational gap = 1 - nf * law_at(d, pi);
    if (gap > worst) worst = gap;
  }
  return worst;
}

inline Rational total_variation(const ExactDistribution& d, int n) {
  const Rational u = Rational(1) / static_cast<long long>(factorial(n));
  Rational sum = 0;
  for (const auto& pi : all_permutations(n)) {
    Rational q = law_at(d, pi);
    sum += q > u ? Rational(q - u) : Rational(u - q);
  }
  return sum / 2;
}

// ---- exact tail of the stopping rules -----------------------------------------------------

namespace detail {

// Coverage of the rule so far. All-pairs: bitset of met pairs. Sequential:
// current window card and the cards it has met inside the window.
struct Coverage {
  int window = 1;
  std::uint64_t mask = 0;
  auto operator<=>(const Coverage&) const = default;
};

class CoverageRule {
 public:
  CoverageRule(StoppingKind kind, int n) : kind_(kind), n_(n) {
    if (pair_count(n) > 63 || n > 63) throw std::invalid_argument("coverage bitset too small for n");
  }

  Coverage start() const {
    Coverage c;
    if (kind_ == StoppingKind::kSequential) c.mask = bit(1);
    return c;
  }

  bool done(const Coverage& c) const {
    if (kind_ == StoppingKind::kAllPairs) return c.mask == full_pairs();
    return c.window > n_ || n_ == 1;
  }

  Coverage advance(Coverage c, const std::vector<InteractionEvent>& events) const {
    if (done(c)) return c;
    if (kind_ == StoppingKind::kAllPairs) {
      for (const auto& e : events) c.mask |= std::uint64_t{1} << pair_index(n_, e.pair.i, e.pair.j);
      return c;
    }
    const int i = c.window;
    for (const auto& e : events) {
      if (e.pair.i == i) c.mask |= bit(e.pair.j);
      if (e.pair.j == i) c.mask |= bit(e.pair.i);
    }
    if (c.mask == full_cards()) {
      ++c.window;
      c.mask = c.window <= n_ ? bit(c.window) : 0;
    }
    return c;
  }

 private:
  static std::uint64_t bit(int card) { return std::uint64_t{1} << (card - 1); }
  std::uint64_t full_pairs() const { return (std::uint64_t{1} << pair_count(n_)) - 1; }
  std::uint64_t full_cards() const { return (std::uint64_t{1} << n_) - 1; }

  StoppingKind kind_;
  int n_;
};

}  // namespace detail

struct MixingRow {
  int t = 0;
  Rational sep;
  Rational tv;
  Rational tail;  // P(T > t)
  bool holds() const { return sep <= tail; }
};

// One joint evolution of (state, rule coverage) gives the state law and the
// exact tail of the stopping time.
inline std::vector<MixingRow> mixing_table(const ProcessSpec& spec, const std::vector<int>& t_grid, StoppingKind kind,
                                           std::size_t guard = 2'000'000) {
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    if (t_grid[k] < 0) throw std::invalid_argument("t must be nonnegative");
    if (k && t_grid[k] <= t_grid[k - 1]) throw std::invalid_argument("t grid must be strictly increasing");
  }
  const detail::CoverageRule rule(kind, spec.n);
  using Key = std::pair<ProcessState, detail::Coverage>;
  std::map<Key, Rational> law{{{canonical_start(spec), rule.start()}, 1}};
  std::vector<MixingRow> out;
  int t = 0;
  for (int target : t_grid) {
    for (; t < target; ++t) {
      std::map<Key, Rational> next;
      for (const auto& [key, q] : law) {
        const auto& [x, cov] = key;
        for (const auto& tr : enumerate_transitions(spec, x)) {
          const auto events = step_events(spec, x, tr.record, tr.next, t + 1);
          next[{tr.next, rule.advance(cov, events)}] += q * tr.probability;
        }
      }
      if (next.size() > guard) throw EnumerationGuard("augmented state space exceeds guard");
      law = std::move(next);
    }
    StateLaw states;
    Rational tail = 0;
    for (const auto& [key, q] : law) {
      states[key.first] += q;
      if (!rule.done(key.second)) tail += q;
    }
    const auto d = project_law(spec, states);
    out.push_back({target, separation_distance(d, spec.n), total_variation(d, spec.n), tail});
  }
  return out;
}

struct MutationBoundReport {
  std::vector<MixingRow> rows;
  bool holds() const {
    return std::all_of(rows.begin(), rows.end(), [](const MixingRow& r) { return r.holds(); });
  }
};

inline MutationBoundReport verify_mutation_bound(const ProcessSpec& spec, const std::vector<int>& t_grid,
                                                 StoppingKind kind = StoppingKind::kAllPairs) {
  return {mixing_table(spec, t_grid, kind)};
}

inline std::vector<int> t_range(int lo, int hi) {
  std::vector<int> out;
  for (int t = lo; t <= hi; ++t) out.push_back(t);
  return out;
}

// ---- scaling fits ---------------------------------------------------------------------------

struct ScalingPoint {
  int n = 0;
  double statistic = 0;
  double stderr_ = 0;
};

struct ScalingSeries {
  std::string statistic = "mean_pair_time";
  std::vector<ScalingPoint> points;
};

struct ScalingFit {
  double exponent = 0;
  double stderr_ = 0;
  double r2 = 0;
  double corrected_exponent = 0;  // fit of statistic / log n
};

namespace detail {

struct LineFit {
  double slope = 0;
  double slope_stderr = 0;
  double r2 = 0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += x[k];
    sy += y[k];
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  const double sse = std::max(0.0, syy - f.slope * sxy);
  f.r2 = syy > 0 ? 1 - sse / syy : 1.0;
  f.slope_stderr = x.size() > 2 ? std::sqrt(sse / (m - 2) / sxx) : 0.0;
  return f;
}

}  // namespace detail

inline ScalingFit scaling_fit(const ScalingSeries& s) {
  if (s.points.size() < 3) throw std::invalid_argument("scaling fit needs at least 3 points");
  std::vector<double> x, y, yc;
  for (std::size_t k = 0; k < s.points.size(); ++k) {
    const auto& p = s.points[k];
    if (k && p.n <= s.points[k - 1].n) throw std::invalid_argument("deck sizes must be strictly increasing");
    if (p.n < 2 || p.statistic <= 0) throw std::invalid_argument("scaling points need n >= 2 and a positive statistic");
    x.push_back(std::log(static_cast<double>(p.n)));
    y.push_back(std::log(p.statistic));
    yc.push_back(std::log(p.statistic / std::log(static_cast<double>(p.n))));
  }
  const auto raw = detail::least_squares(x, y);
  const auto corrected = detail::least_squares(x, yc);
  return {raw.slope, raw.slope_stderr, raw.r2, corrected.slope};
}

// Mean per-pair first-interaction time; replica r at size n uses stream (seed, n, r).
inline ScalingSeries scaling_series(ProcessSpec spec, const std::vector<int>& n_list, std::size_t replicas,
                                    std::uint64_t seed) {
  if (replicas < 2) throw std::invalid_argument("scaling needs at least 2 replicas");
  ScalingSeries out;
  for (int n : n_list) {
    spec.n = n;
    spec.validate();
    const auto row = combining_row(spec, replicas, seed);
    double var = 0;
    for (double v : row.replica_pair_means) var += (v - row.pair_mean_time) * (v - row.pair_mean_time);
    var /= static_cast<double>(replicas - 1);
    out.points.push_back({n, row.pair_mean_time, std::sqrt(var / static_cast<double>(replicas))});
  }
  return out;
}

}  // namespace mutime
