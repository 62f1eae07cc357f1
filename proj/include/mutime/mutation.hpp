#pragma once

// Path relabelling and the injective path maps behind the all-pairs and
// sequential stopping rules.
//
// Relabelling the records after time s by g sends the end permutation pi to
// g.pi (perm-core label action). Relabels applied at decreasing times
// compose with the later-applied one on the left, so the backward scan keeps
// its residual as target.end^{-1} multiplied on the right.

#include "mutime/factorization.hpp"
#include "mutime/paths.hpp"
#include "mutime/stopping.hpp"

#include <map>
#include <set>

namespace mutime {

class RuleUnsatisfied : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class NotInImage : public std::invalid_argument {
 public:
  NotInImage() : std::invalid_argument("not in image") {}
};

class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct RelabelAction {
  int time = 0;  // relabel every step strictly after `time`
  Transposition pair;
};

// Mutation maps need at most one two-sided event per step and twins that are
// involutions; wash1d-long (simultaneous overtakes) and random-to-random
// (one-way twin) lack this.
inline bool supports_mutation(Family f) {
  return f == Family::kWash1d || f == Family::kWashGrid || f == Family::kAdjTransposition ||
         f == Family::kCycleTransposition;
}

inline void require_mutation_support(const ProcessSpec& spec) {
  if (!supports_mutation(spec.family)) throw std::invalid_argument("mutation maps are not defined for " + family_name(spec.family));
}

// Applies g to every record after `time` and to the collection. Walk records
// name positions, so for walks this leaves the path unchanged.
inline Path relabel_after(Path path, int time, const Permutation& g) {
  if (time < 0 || time > path.length()) throw std::out_of_range("relabel time out of range");
  for (int s = time + 1; s <= path.length(); ++s) path.steps[s - 1] = relabel_record(g, path.steps[s - 1]);
  if (path.collection) path.collection = relabel_collection(g, *path.collection);
  return path;
}

namespace detail {

// `before` is the state at e.time - 1 of `path`.
inline Path relabel_at_event(Path path, const ProcessState& before, const InteractionEvent& e) {
  if (!fixes_state(e.kind)) {
    auto& rec = path.steps[e.time - 1];
    rec = twin_record(path.spec, before, rec, e);
  }
  return relabel_after(std::move(path), e.time, Permutation::transposition(path.spec.n, e.pair.i, e.pair.j));
}

inline bool same_cycle(const Permutation& p, const Transposition& t) { return mutime::same_cycle(p, t.i, t.j); }

}  // namespace detail

// Exchanges the pair's roles after the interaction at e.time. The event must
// be one the detectors emit for this path.
inline Path relabel_suffix(const Path& path, const InteractionEvent& e) {
  if (e.time < 1 || e.time > path.length()) throw std::out_of_range("relabel time out of range");
  const auto r = replay(path);
  const auto& es = r.events[e.time - 1];
  if (std::find(es.begin(), es.end(), e) == es.end()) throw std::invalid_argument("no such interaction in path");
  return detail::relabel_at_event(path, r.states[e.time - 1], e);
}

// Uses the pair's interaction at that time when there is one (keeping the
// probability); otherwise a plain suffix relabel.
inline Path relabel_suffix(const Path& path, const RelabelAction& a) {
  if (a.time < 0 || a.time > path.length()) throw std::out_of_range("relabel time out of range");
  if (a.time >= 1) {
    const auto r = replay(path);
    for (const auto& e : r.events[a.time - 1])
      if (e.pair == a.pair) return detail::relabel_at_event(path, r.states[a.time - 1], e);
  }
  return relabel_after(path, a.time, Permutation::transposition(path.spec.n, a.pair.i, a.pair.j));
}

// ---- all-pairs rule ------------------------------------------------------------

inline Path mutate_fast(const Path& path, const Permutation& target) {
  require_mutation_support(path.spec);
  const auto r = replay(path);
  const auto trace = event_trace(r);
  if (!all_pairs_time(trace, path.spec.n).achieved) throw RuleUnsatisfied("all-pairs rule unsatisfied");
  Permutation rho = compose(target, invert(r.end));
  std::set<Transposition> seen;
  Path current = path;
  // Backward over slots; within a slot, reverse lexicographic pair order.
  for (auto it = trace.rbegin(); it != trace.rend(); ++it) {
    if (!seen.insert(it->pair).second) continue;
    if (!detail::same_cycle(rho, it->pair)) continue;
    // Later relabels only touch steps after their own slot, so up to here the
    // current path still agrees with the source.
    current = detail::relabel_at_event(std::move(current), r.states[it->time - 1], *it);
    rho = compose(rho, it->pair.as_permutation(path.spec.n));
  }
  if (!rho.is_identity()) throw ContractViolation("fast mutation residual is not the identity");
  return current;
}

inline Path mutate_fast_inverse(const Path& image, const Permutation& source_end, const Permutation& target) {
  require_mutation_support(image.spec);
  const int n = image.spec.n;
  const auto r = replay(image);
  if (r.end != target) throw NotInImage();
  Permutation kappa = compose(target, invert(source_end));
  std::set<Transposition> seen;
  Path current = image;
  for (int tau = image.length(); tau >= 1; --tau) {
    const auto& events = r.events[tau - 1];
    if (events.empty()) continue;
    // Source-path pairs: the image at tau is the source relabelled by kappa.
    const Permutation kinv = invert(kappa);
    std::vector<Transposition> source;
    for (const auto& e : events) {
      int a = kinv(e.pair.i), b = kinv(e.pair.j);
      source.emplace_back(std::min(a, b), std::max(a, b));
    }
    std::sort(source.rbegin(), source.rend());
    Permutation rho = kappa;
    for (const auto& p : source) {
      if (!seen.insert(p).second) continue;
      if (detail::same_cycle(rho, p)) rho = compose(rho, p.as_permutation(n));
    }
    const Permutation g = compose(rho, kinv);
    if (!g.is_identity()) {
      const bool one_sided = std::all_of(events.begin(), events.end(), [](const auto& e) { return fixes_state(e.kind); });
      if (one_sided && relabel_state(g, r.states[tau]) == r.states[tau]) {
        current = relabel_after(std::move(current), tau, g);
      } else if (events.size() == 1 && !one_sided &&
                 g == Permutation::transposition(n, events[0].pair.i, events[0].pair.j)) {
        current = detail::relabel_at_event(std::move(current), r.states[tau - 1], events[0]);
      } else {
        throw NotInImage();
      }
    }
    kappa = rho;
  }
  if (!kappa.is_identity()) throw NotInImage();
  const auto back = replay(current);
  if (back.end != source_end || !all_pairs_time(event_trace(back), n).achieved) throw NotInImage();
  return current;
}

// ---- sequential rule -----------------------------------------------------------------

namespace detail {

inline std::optional<InteractionEvent> first_meeting_after(const std::vector<InteractionEvent>& trace,
                                                           const Transposition& pair, int after) {
  for (const auto& e : trace)
    if (e.time > after && e.pair == pair) return e;
  return std::nullopt;
}

// Earliest t > after with card i meeting every other card in (after, t].
inline std::optional<int> window_close(const std::vector<InteractionEvent>& trace, int n, int i, int after) {
  std::vector<char> met(n + 1, 0);
  met[i] = 1;
  int missing = n - 1;
  if (missing == 0) return after;
  for (const auto& e : trace) {
    if (e.time <= after) continue;
    int other = e.pair.i == i ? e.pair.j : e.pair.j == i ? e.pair.i : 0;
    if (other && !met[other]) {
      met[other] = 1;
      if (--missing == 0) return e.time;
    }
  }
  return std::nullopt;
}

inline Transposition star_pair(int i, int a) { return {std::min(i, a), std::max(i, a)}; }

}  // namespace detail

// target.end^{-1} = (1 a_1)(2 a_2)...(n a_n); the swap for i sits at the first
// meeting of i and a_i inside window (T_{i-1}, T_i].
inline Path mutate_slow(const Path& path, const Permutation& target) {
  require_mutation_support(path.spec);
  const int n = path.spec.n;
  const auto r = replay(path);
  const auto trace = event_trace(r);
  const auto rep = sequential_times(trace, n);
  if (!rep.achieved) throw RuleUnsatisfied("sequential rule unsatisfied");
  const auto a = star_factor(compose(target, invert(r.end))).a;
  Path current = path;
  for (int i = n; i >= 1; --i) {
    if (a[i - 1] == i) continue;
    auto e = detail::first_meeting_after(trace, detail::star_pair(i, a[i - 1]), *rep.sequential_times[i - 1]);
    if (!e || e->time > *rep.sequential_times[i]) throw ContractViolation("window lacks the required meeting");
    current = detail::relabel_at_event(std::move(current), r.states[e->time - 1], *e);
  }
  return current;
}

inline Path mutate_slow_inverse(const Path& image, const Permutation& source_end, const Permutation& target) {
  require_mutation_support(image.spec);
  const int n = image.spec.n;
  if (end_permutation(image) != target) throw NotInImage();
  const auto a = star_factor(compose(target, invert(source_end))).a;
  Path current = image;
  int prev = 0;
  for (int i = 1; i <= n; ++i) {
    auto r = replay(current);
    auto trace = event_trace(r);
    if (a[i - 1] != i) {
      auto e = detail::first_meeting_after(trace, detail::star_pair(i, a[i - 1]), prev);
      if (!e) throw NotInImage();
      current = detail::relabel_at_event(std::move(current), r.states[e->time - 1], *e);
      r = replay(current);
      trace = event_trace(r);
    }
    auto close = detail::window_close(trace, n, i, prev);
    if (!close) throw NotInImage();
    prev = *close;
  }
  if (end_permutation(current) != source_end) throw NotInImage();
  return current;
}

enum class MutationRule { kFast, kSlow };

inline std::string rule_name(MutationRule r) { return r == MutationRule::kFast ? "fast" : "slow"; }

inline MutationRule parse_mutation_rule(const std::string& s) {
  if (s == "fast" || s == "all-pairs") return MutationRule::kFast;
  if (s == "slow" || s == "sequential") return MutationRule::kSlow;
  throw std::invalid_argument("unknown mutation rule '" + s + "'");
}

inline StoppingKind stopping_kind(MutationRule r) {
  return r == MutationRule::kFast ? StoppingKind::kAllPairs : StoppingKind::kSequential;
}

inline Path mutate(MutationRule rule, const Path& p, const Permutation& target) {
  return rule == MutationRule::kFast ? mutate_fast(p, target) : mutate_slow(p, target);
}

inline Path mutate_inverse(MutationRule rule, const Path& p, const Permutation& source_end, const Permutation& target) {
  return rule == MutationRule::kFast ? mutate_fast_inverse(p, source_end, target)
                                     : mutate_slow_inverse(p, source_end, target);
}

inline bool satisfies(StoppingKind kind, const Replay& r, int n) { return stopping_time(kind, event_trace(r), n).achieved; }

// ---- exhaustive verification ------------------------------------------------------------

struct MutationReport {
  std::string family;
  int n = 0;
  int t = 0;
  std::string rule;
  std::size_t paths_total = 0;
  std::size_t paths_satisfying = 0;
  std::size_t maps_checked = 0;
  std::size_t roundtrip_failures = 0;
  std::size_t end_mismatch = 0;
  std::size_t prob_mismatch = 0;
  std::size_t injectivity_failures = 0;
  std::size_t count_inequality_failures = 0;  // P(satisfying, end pi) > P(end pi') for some (pi, pi')
  std::size_t contract_violations = 0;

  bool ok() const {
    return roundtrip_failures + end_mismatch + prob_mismatch + injectivity_failures + count_inequality_failures +
               contract_violations ==
           0;
  }
};

inline MutationReport verify_mutation(const ProcessSpec& spec, int t, MutationRule rule) {
  require_mutation_support(spec);
  MutationReport rep{family_name(spec.family), spec.n, t, rule_name(rule)};
  const auto targets = all_permutations(spec.n);
  std::map<Permutation, Rational> all_mass, sat_mass;
  std::vector<std::pair<Path, Replay>> satisfying;
  for_each_path(spec, t, [&](const Path& p, const Rational&) {
    ++rep.paths_total;
    auto r = replay(p);
    all_mass[r.end] += r.probability;
    if (satisfies(stopping_kind(rule), r, spec.n)) {
      sat_mass[r.end] += r.probability;
      satisfying.emplace_back(p, std::move(r));
    }
  });
  rep.paths_satisfying = satisfying.size();
  for (const auto& target : targets) {
    std::set<std::pair<Permutation, Path>> images;
    for (const auto& [p, r] : satisfying) {
      ++rep.maps_checked;
      try {
        Path img = mutate(rule, p, target);
        auto ri = replay(img);
        if (ri.end != target) ++rep.end_mismatch;
        if (ri.probability != r.probability) ++rep.prob_mismatch;
        if (!images.emplace(r.end, img).second) ++rep.injectivity_failures;
        try {
          if (mutate_inverse(rule, img, r.end, target) != p) ++rep.roundtrip_failures;
        } catch (const NotInImage&) {
          ++rep.roundtrip_failures;
        }
      } catch (const ContractViolation&) {
        ++rep.contract_violations;
      }
    }
  }
  for (const auto& pi : targets)
    for (const auto& pi2 : targets) {
      auto s = sat_mass.count(pi) ? sat_mass.at(pi) : Rational(0);
      auto a = all_mass.count(pi2) ? all_mass.at(pi2) : Rational(0);
      if (s > a) ++rep.count_inequality_failures;
    }
  return rep;
}

// Smallest t at which some path satisfies the rule (searching t = 1 .. t_max).
inline std::optional<int> smallest_satisfying_t(const ProcessSpec& spec, StoppingKind kind, int t_max) {
  for (int t = 1; t <= t_max; ++t) {
    bool any = false;
    for_each_path(spec, t, [&](const Path& p, const Rational&) {
      if (!any && satisfies(kind, replay(p), spec.n)) any = true;
    });
    if (any) return t;
  }
  return std::nullopt;
}

// ---- the pairwise swap of the motivating example --------------------------------------------

struct PairSwapReport {
  std::size_t paths_interacted = 0;
  Rational max_discrepancy = 0;  // max over pi of |P(end pi) - P(end (i j).pi)| among interacted paths
  std::size_t bijection_failures = 0;
  bool ok() const { return max_discrepancy == 0 && bijection_failures == 0; }
};

// Over paths where i and j interact, the mass ending at pi equals the mass
// ending at (i j).pi; the explicit map swaps the pair after their first meeting.
inline PairSwapReport verify_pair_swap_bijection(const ProcessSpec& spec, int t, int i, int j) {
  const Transposition pair(i, j);
  const auto swap = pair.as_permutation(spec.n);
  PairSwapReport rep;
  std::map<Permutation, Rational> mass;
  std::set<Path> domain;
  std::vector<std::pair<Path, Replay>> interacted;
  for_each_path(spec, t, [&](const Path& p, const Rational&) {
    auto r = replay(p);
    const auto trace = event_trace(r);
    if (std::none_of(trace.begin(), trace.end(), [&](const auto& e) { return e.pair == pair; })) return;
    ++rep.paths_interacted;
    mass[r.end] += r.probability;
    domain.insert(p);
    interacted.emplace_back(p, std::move(r));
  });
  for (const auto& pi : all_permutations(spec.n)) {
    auto a = mass.count(pi) ? mass.at(pi) : Rational(0);
    const auto pj = compose(swap, pi);
    auto b = mass.count(pj) ? mass.at(pj) : Rational(0);
    Rational d = a > b ? Rational(a - b) : Rational(b - a);
    if (d > rep.max_discrepancy) rep.max_discrepancy = d;
  }
  for (const auto& [p, r] : interacted) {
    const auto trace = event_trace(r);
    const auto first = *std::find_if(trace.begin(), trace.end(), [&](const auto& e) { return e.pair == pair; });
    Path q = detail::relabel_at_event(p, r.states[first.time - 1], first);
    auto rq = replay(q);
    const bool ok = rq.end == compose(swap, r.end) && rq.probability == r.probability && domain.count(q) &&
                    detail::relabel_at_event(q, rq.states[first.time - 1], first) == p;
    if (!ok) ++rep.bijection_failures;
  }
  return rep;
}

// ---- conditioning on the stopping rule --------------------------------------------------------

struct ConditionedDistribution {
  std::map<Permutation, Rational> law;  // every permutation of S_n listed
  Rational mass;                        // P(rule satisfied by t)
};

inline ConditionedDistribution conditioned_distribution(const ProcessSpec& spec, int t,
                                                        std::optional<StoppingKind> rule) {
  ConditionedDistribution out;
  for (const auto& pi : all_permutations(spec.n)) out.law[pi] = 0;
  for_each_path(spec, t, [&](const Path& p, const Rational& pr) {
    auto r = replay(p);
    if (rule && !satisfies(*rule, r, spec.n)) return;
    out.mass += pr;
    out.law[r.end] += pr;
  });
  if (out.mass == 0) throw std::invalid_argument("empty condition");
  for (auto& [pi, q] : out.law) q /= out.mass;
  return out;
}

}  // namespace mutime
