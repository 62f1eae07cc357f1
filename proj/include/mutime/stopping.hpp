#pragma once

// Interaction tracking and the two stopping rules: all pairs (T) and the
// sequential windows (T_1 .. T_n). Half-step events count at their integer step.

#include "mutime/process.hpp"
#include "mutime/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

namespace mutime {

enum class StoppingKind { kAllPairs, kSequential };

inline std::string stopping_name(StoppingKind k) { return k == StoppingKind::kAllPairs ? "all-pairs" : "sequential"; }

inline StoppingKind parse_stopping(const std::string& s) {
  if (s == "all-pairs" || s == "fast") return StoppingKind::kAllPairs;
  if (s == "sequential" || s == "slow") return StoppingKind::kSequential;
  throw std::invalid_argument("unknown stopping rule '" + s + "'");
}

inline int pair_count(int n) { return n * (n - 1) / 2; }

// Index of {i, j}, i < j, in lexicographic order.
inline int pair_index(int n, int i, int j) { return (i - 1) * (2 * n - i) / 2 + (j - i - 1); }

class InteractionMatrix {
 public:
  explicit InteractionMatrix(int n) : n_(n), last_(static_cast<std::size_t>(pair_count(n)), -1) {}

  void track(const std::vector<InteractionEvent>& events) {
    for (const auto& e : events) {
      if (e.pair.j > n_) throw std::out_of_range("event label exceeds n");
      int& t = last_[pair_index(n_, e.pair.i, e.pair.j)];
      t = std::max(t, e.time);
    }
  }

  std::optional<int> last_time(int i, int j) const {
    if (i > j) std::swap(i, j);
    int t = last_[pair_index(n_, i, j)];
    return t < 0 ? std::nullopt : std::optional<int>(t);
  }

  int n() const { return n_; }

 private:
  int n_;
  std::vector<int> last_;
};

struct StoppingReport {
  StoppingKind kind = StoppingKind::kAllPairs;
  bool achieved = false;
  std::optional<int> time;
  std::vector<std::optional<int>> sequential_times;  // T_0 .. T_n, sequential rule only
};

inline StoppingReport all_pairs_time(const std::vector<InteractionEvent>& trace, int n) {
  std::vector<int> first(static_cast<std::size_t>(pair_count(n)), -1);
  for (const auto& e : trace) {
    int& f = first[pair_index(n, e.pair.i, e.pair.j)];
    if (f < 0 || e.time < f) f = e.time;
  }
  StoppingReport rep{StoppingKind::kAllPairs, true, 0, {}};
  for (int f : first) {
    if (f < 0) return {StoppingKind::kAllPairs, false, std::nullopt, {}};
    rep.time = std::max(*rep.time, f);
  }
  return rep;
}

// Window i is (T_{i-1}, T_i]: card i must meet every other card strictly after T_{i-1}.
inline StoppingReport sequential_times(std::vector<InteractionEvent> trace, int n) {
  std::stable_sort(trace.begin(), trace.end(), [](const auto& a, const auto& b) { return a.time < b.time; });
  StoppingReport rep{StoppingKind::kSequential, false, std::nullopt, {0}};
  int prev = 0;
  for (int i = 1; i <= n; ++i) {
    std::vector<char> met(n + 1, 0);
    met[i] = 1;
    int missing = n - 1;
    std::optional<int> ti = missing == 0 ? std::optional<int>(prev) : std::nullopt;
    for (const auto& e : trace) {
      if (missing == 0) break;
      if (e.time <= prev) continue;
      int other = e.pair.i == i ? e.pair.j : e.pair.j == i ? e.pair.i : 0;
      if (other && !met[other]) {
        met[other] = 1;
        if (--missing == 0) ti = e.time;
      }
    }
    if (!ti) {
      for (int k = i; k <= n; ++k) rep.sequential_times.push_back(std::nullopt);
      return rep;
    }
    rep.sequential_times.push_back(ti);
    prev = *ti;
  }
  rep.achieved = true;
  rep.time = prev;
  return rep;
}

inline StoppingReport stopping_time(StoppingKind kind, const std::vector<InteractionEvent>& trace, int n) {
  return kind == StoppingKind::kAllPairs ? all_pairs_time(trace, n) : sequential_times(trace, n);
}

// Streams events one step at a time and reports when the rule is first met.
class StoppingTracker {
 public:
  StoppingTracker(StoppingKind kind, int n)
      : kind_(kind), n_(n), seen_(static_cast<std::size_t>(pair_count(n)), 0), missing_(pair_count(n)) {
    if (kind_ == StoppingKind::kSequential) start_window();
    if (missing_ == 0) done_ = 0;
  }

  // Returns true once the rule is satisfied (at or before `time`).
  bool observe(const std::vector<InteractionEvent>& events, int time) {
    if (done_) return true;
    if (kind_ == StoppingKind::kAllPairs) {
      for (const auto& e : events) {
        char& s = seen_[pair_index(n_, e.pair.i, e.pair.j)];
        if (!s) {
          s = 1;
          --missing_;
        }
      }
      if (missing_ == 0) done_ = time;
      return done_.has_value();
    }
    // Events at the closing time of a window do not count for the next window.
    for (const auto& e : events) {
      int other = e.pair.i == card_ ? e.pair.j : e.pair.j == card_ ? e.pair.i : 0;
      if (other && !met_[other]) {
        met_[other] = 1;
        --missing_;
      }
    }
    if (missing_ == 0) {
      if (++card_ > n_) done_ = time;
      else start_window();
    }
    return done_.has_value();
  }

  std::optional<int> time() const { return done_; }

 private:
  void start_window() {
    met_.assign(n_ + 1, 0);
    met_[card_] = 1;
    missing_ = n_ - 1;
  }

  StoppingKind kind_;
  int n_;
  std::vector<char> seen_;
  std::vector<char> met_;
  int missing_;
  int card_ = 1;
  std::optional<int> done_;
};

// Runs the process from the canonical start until the rule holds or t_max steps pass.
inline std::optional<int> sample_stopping_time(const ProcessSpec& spec, StoppingKind kind, int t_max, Rng& rng) {
  StoppingTracker tracker(kind, spec.n);
  if (tracker.time()) return tracker.time();
  ProcessState x = canonical_start(spec);
  for (int t = 1; t <= t_max; ++t) {
    auto s = sample_step(spec, x, rng, t);
    if (tracker.observe(s.events, t)) return tracker.time();
    x = std::move(s.next);
  }
  return std::nullopt;
}

struct Interval {
  double lo = 0;
  double hi = 1;
};

inline Interval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.959963984540054) {
  if (trials == 0) return {0, 1};
  const double nn = static_cast<double>(trials);
  const double ph = static_cast<double>(successes) / nn;
  const double denom = 1 + z * z / nn;
  const double center = (ph + z * z / (2 * nn)) / denom;
  const double half = z * std::sqrt(ph * (1 - ph) / nn + z * z / (4 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

struct TailEstimate {
  int t = 0;
  std::size_t exceed = 0;
  std::size_t replicas = 0;
  double estimate = 0;
  Interval ci;
};

// Monte Carlo P(T > t) for every t in the grid. Replica r uses stream (seed, 0, r).
inline std::vector<TailEstimate> tail_estimates(const ProcessSpec& spec, StoppingKind kind, const std::vector<int>& t_grid,
                                                std::size_t replicas, std::uint64_t seed) {
  if (replicas == 0) throw std::invalid_argument("replicas must be at least 1");
  const int t_max = t_grid.empty() ? 0 : *std::max_element(t_grid.begin(), t_grid.end());
  std::vector<std::optional<int>> times(replicas);
  for (std::size_t r = 0; r < replicas; ++r) {
    Rng rng = make_stream(seed, 0, r);
    times[r] = sample_stopping_time(spec, kind, t_max, rng);
  }
  std::vector<TailEstimate> out;
  for (int t : t_grid) {
    TailEstimate e{t, 0, replicas, 0, {}};
    for (const auto& T : times) e.exceed += !T || *T > t;
    e.estimate = static_cast<double>(e.exceed) / static_cast<double>(replicas);
    e.ci = wilson_interval(e.exceed, replicas);
    out.push_back(e);
  }
  return out;
}

inline TailEstimate tail_estimate(const ProcessSpec& spec, StoppingKind kind, int t, std::size_t replicas,
                                  std::uint64_t seed) {
  return tail_estimates(spec, kind, {t}, replicas, seed).front();
}

// ---- first meeting times -------------------------------------------------------

struct FirstMeetings {
  std::vector<long long> first;  // per pair (lexicographic index); -1 if not met
  std::optional<long long> all_pairs;
  long long steps = 0;
};

namespace detail {

class MeetingLog {
 public:
  explicit MeetingLog(int n) : n_(n), out_{std::vector<long long>(static_cast<std::size_t>(pair_count(n)), -1), {}, 0},
                               missing_(pair_count(n)) {}

  void meet(int a, int b, long long t) {
    if (a > b) std::swap(a, b);
    long long& f = out_.first[pair_index(n_, a, b)];
    if (f < 0) {
      f = t;
      if (--missing_ == 0) out_.all_pairs = t;
    }
  }
  bool done() const { return missing_ == 0; }
  FirstMeetings finish(long long steps) {
    out_.steps = steps;
    if (missing_ == 0 && !out_.all_pairs) out_.all_pairs = 0;
    return std::move(out_);
  }

 private:
  int n_;
  FirstMeetings out_;
  int missing_;
};

inline FirstMeetings wash_line_meetings(const ProcessSpec& spec, Rng& rng, long long max_steps, bool grid) {
  const int n = spec.n;
  MeetingLog log(n);
  std::vector<int> pos(n);
  std::iota(pos.begin(), pos.end(), 0);
  std::vector<std::vector<int>> at(n);
  for (int c = 1; c <= n; ++c) at[c - 1] = {c};
  long long t = 0;
  while (!log.done() && t < max_steps) {
    ++t;
    const int card = uniform_int(rng, 1, n);
    int dest = pos[card - 1];
    if (grid) {
      if (uniform_int(rng, 0, 1) == 1) {
        const int deg = (dest > 0) + (dest < n - 1);
        if (deg > 0) {
          const int k = uniform_int(rng, 1, deg);
          dest = (dest > 0 && k == 1) ? dest - 1 : dest + 1;
        }
      }
    } else {
      const int u = uniform_int(rng, 0, 3);
      const int mv = u == 0 ? 1 : u == 1 ? -1 : 0;
      if (dest + mv >= 0 && dest + mv < n) dest += mv;
    }
    if (dest == pos[card - 1]) continue;
    auto& from = at[pos[card - 1]];
    from.erase(std::find(from.begin(), from.end(), card));
    for (int other : at[dest]) log.meet(card, other, t);
    at[dest].push_back(card);
    pos[card - 1] = dest;
  }
  return log.finish(t);
}

inline FirstMeetings adjacent_meetings(const ProcessSpec& spec, Rng& rng, long long max_steps) {
  const int n = spec.n;
  MeetingLog log(n);
  std::vector<int> deck(n);
  std::iota(deck.begin(), deck.end(), 1);
  long long t = 0;
  while (!log.done() && t < max_steps) {
    ++t;
    const int k = uniform_int(rng, 1, n - 1);
    log.meet(deck[k - 1], deck[k], t);
    if (uniform_int(rng, 0, 1) == 1) std::swap(deck[k - 1], deck[k]);
  }
  return log.finish(t);
}

inline FirstMeetings cycle_meetings(const ProcessSpec& spec, Rng& rng, long long max_steps) {
  const int n = spec.n;
  MeetingLog log(n);
  std::vector<int> deck(n);
  std::iota(deck.begin(), deck.end(), 1);
  long long t = 0;
  while (!log.done() && t < max_steps) {
    ++t;
    const int g = uniform_int(rng, 0, 2);
    if (g == 1) {
      std::rotate(deck.begin(), deck.begin() + 1, deck.end());
    } else {
      log.meet(deck[0], deck[1], t);
      if (g == 2) std::swap(deck[0], deck[1]);
    }
  }
  return log.finish(t);
}

inline FirstMeetings random_to_random_meetings(const ProcessSpec& spec, Rng& rng, long long max_steps) {
  const int n = spec.n;
  MeetingLog log(n);
  std::vector<int> deck(n);
  std::iota(deck.begin(), deck.end(), 1);
  long long t = 0;
  while (!log.done() && t < max_steps) {
    ++t;
    const int from = uniform_int(rng, 1, n);
    const int to = uniform_int(rng, 1, n);
    const int c = deck[from - 1];
    deck.erase(deck.begin() + (from - 1));
    deck.insert(deck.begin() + (to - 1), c);
    if (to < n) log.meet(c, deck[to], t);
  }
  return log.finish(t);
}

}  // namespace detail

// Reference implementation through the generic sampler.
inline FirstMeetings generic_first_meetings(const ProcessSpec& spec, Rng& rng, long long max_steps) {
  detail::MeetingLog log(spec.n);
  ProcessState x = canonical_start(spec);
  long long t = 0;
  while (!log.done() && t < max_steps) {
    ++t;
    auto s = sample_step(spec, x, rng, static_cast<int>(t));
    for (const auto& e : s.events) log.meet(e.pair.i, e.pair.j, t);
    x = std::move(s.next);
  }
  return log.finish(t);
}

// Same random stream and results as generic_first_meetings, specialised per family.
inline FirstMeetings first_meetings(const ProcessSpec& spec, Rng& rng, long long max_steps) {
  switch (spec.family) {
    case Family::kWash1d: return detail::wash_line_meetings(spec, rng, max_steps, false);
    case Family::kWashGrid:
      if (spec.dim == 1) return detail::wash_line_meetings(spec, rng, max_steps, true);
      break;
    case Family::kAdjTransposition: return detail::adjacent_meetings(spec, rng, max_steps);
    case Family::kCycleTransposition: return detail::cycle_meetings(spec, rng, max_steps);
    case Family::kRandomToRandom: return detail::random_to_random_meetings(spec, rng, max_steps);
    default: break;
  }
  return generic_first_meetings(spec, rng, max_steps);
}

inline double mean_pair_time(const FirstMeetings& m) {
  double s = 0;
  for (long long f : m.first) {
    if (f < 0) throw std::logic_error("mean pair time needs every pair to have met");
    s += static_cast<double>(f);
  }
  return m.first.empty() ? 0.0 : s / static_cast<double>(m.first.size());
}

// ---- combining -----------------------------------------------------------------

inline double log_pairs(int k) { return k >= 2 ? std::log(static_cast<double>(k)) : std::log(static_cast<double>(k)) + 1; }

inline double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct CombiningRow {
  int n = 0;
  double pair_mean_time = 0;    // averaged over pairs and replicas
  double all_pairs_median = 0;
  double ratio = 0;             // median / (pair mean * log k), log k + 1 when k = 1
  std::vector<double> replica_pair_means;
  std::vector<double> all_pairs_times;
};

// Replica r at deck size n uses stream (seed, n, r).
inline CombiningRow combining_row(const ProcessSpec& spec, std::size_t replicas, std::uint64_t seed,
                                        long long max_steps = 1LL << 40) {
  CombiningRow row;
  row.n = spec.n;
  double total = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    Rng rng = make_stream(seed, static_cast<std::uint64_t>(spec.n), r);
    auto m = first_meetings(spec, rng, max_steps);
    if (!m.all_pairs) throw std::runtime_error("replica did not reach the all-pairs time within the step budget");
    row.replica_pair_means.push_back(mean_pair_time(m));
    row.all_pairs_times.push_back(static_cast<double>(*m.all_pairs));
    total += row.replica_pair_means.back();
  }
  row.pair_mean_time = total / static_cast<double>(replicas);
  row.all_pairs_median = median(row.all_pairs_times);
  row.ratio = row.all_pairs_median / (row.pair_mean_time * log_pairs(pair_count(spec.n)));
  return row;
}

inline std::vector<CombiningRow> combining_report(ProcessSpec spec, const std::vector<int>& n_list,
                                                        std::size_t replicas, std::uint64_t seed) {
  std::vector<CombiningRow> out;
  for (int n : n_list) {
    spec.n = n;
    spec.validate();
    out.push_back(combining_row(spec, replicas, seed));
  }
  return out;
}

// Calibration: k pairs with i.i.d. exponential meeting times of mean t0.
inline double synthetic_combining_ratio(int k, double t0, std::size_t replicas, std::uint64_t seed) {
  Rng rng(seed);
  std::exponential_distribution<double> exp(1.0 / t0);
  std::vector<double> maxima;
  double total = 0;
  for (std::size_t r = 0; r < replicas; ++r) {
    double mx = 0;
    for (int p = 0; p < k; ++p) {
      double v = exp(rng);
      total += v;
      mx = std::max(mx, v);
    }
    maxima.push_back(mx);
  }
  const double mean = total / static_cast<double>(replicas * static_cast<std::size_t>(k));
  return median(maxima) / (mean * log_pairs(k));
}

}  // namespace mutime
