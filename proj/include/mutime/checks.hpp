#pragma once

// Exhaustive small-n checkers: fairness, the interaction symmetry and jumbled label sets.

#include "mutime/process.hpp"
#include "mutime/wash_ordered.hpp"

#include <functional>
#include <map>
#include <optional>
#include <set>

namespace mutime {

using StateLaw = std::map<ProcessState, Rational>;
using Kernel = std::function<StateLaw(const ProcessState&)>;

inline StateLaw step_law(const ProcessSpec& spec, const ProcessState& x) {
  StateLaw out;
  for (const auto& t : enumerate_transitions(spec, x)) out[t.next] += t.probability;
  return out;
}

inline Kernel process_kernel(const ProcessSpec& spec) {
  return [spec](const ProcessState& x) { return step_law(spec, x); };
}

// States reachable from `start`, closed under the label action.
inline std::vector<ProcessState> reachable_states(const Kernel& kernel, int n, const ProcessState& start,
                                                  std::size_t guard = 200000) {
  const auto group = all_permutations(n);
  std::set<ProcessState> seen;
  std::vector<ProcessState> todo;
  auto add = [&](const ProcessState& s) {
    for (const auto& g : group) {
      auto gs = relabel_state(g, s);
      if (seen.insert(gs).second) todo.push_back(gs);
    }
    if (seen.size() > guard) throw EnumerationGuard("reachable state space exceeds guard");
  };
  add(start);
  while (!todo.empty()) {
    auto x = todo.back();
    todo.pop_back();
    for (const auto& [y, p] : kernel(x)) add(y);
  }
  return {seen.begin(), seen.end()};
}

struct FairWitness {
  ProcessState state;
  Permutation g;
  ProcessState target;
  Rational relabelled_step;  // P(g . X' = target | X = x)
  Rational step_relabelled;  // P(X' = target | X = g . x)
};

struct FairReport {
  bool fair = true;
  std::size_t states_checked = 0;
  std::optional<FairWitness> witness;
};

inline FairReport check_fair(const Kernel& kernel, int n, const ProcessState& start) {
  FairReport rep;
  const auto group = all_permutations(n);
  for (const auto& x : reachable_states(kernel, n, start)) {
    ++rep.states_checked;
    const StateLaw base = kernel(x);
    for (const auto& g : group) {
      StateLaw lhs;
      for (const auto& [y, p] : base) lhs[relabel_state(g, y)] += p;
      const StateLaw rhs = kernel(relabel_state(g, x));
      std::set<ProcessState> support;
      for (const auto& [y, p] : lhs) support.insert(y);
      for (const auto& [y, p] : rhs) support.insert(y);
      for (const auto& y : support) {
        auto a = lhs.count(y) ? lhs.at(y) : Rational(0);
        auto b = rhs.count(y) ? rhs.at(y) : Rational(0);
        if (a != b) {
          rep.fair = false;
          rep.witness = FairWitness{x, g, y, a, b};
          return rep;
        }
      }
    }
  }
  return rep;
}

inline FairReport check_fair(const ProcessSpec& spec) {
  return check_fair(process_kernel(spec), spec.n, canonical_start(spec));
}

// Test fixture: a deterministic chain that moves label 1 to the top.
inline Kernel label_one_to_top_kernel() {
  return [](const ProcessState& x) {
    std::vector<int> cards = std::get<Permutation>(x).map();
    cards.erase(std::find(cards.begin(), cards.end(), 1));
    cards.insert(cards.begin(), 1);
    return StateLaw{{Permutation(std::move(cards)), 1}};
  };
}

// ---- interaction ------------------------------------------------------------

struct InteractionCheck {
  bool holds = false;
  bool fixed_by_pair = false;  // y itself is fixed by (i j)
  Rational forward;            // M(x, y)
  Rational swapped;            // M(x, (i j) . y)
};

// Symmetry on the bare state space.
inline InteractionCheck check_interaction_pair(const ProcessSpec& spec, const ProcessState& x, const ProcessState& y,
                                               int i, int j) {
  const auto swap = Permutation::transposition(spec.n, i, j);
  const auto ys = relabel_state(swap, y);
  InteractionCheck out;
  out.fixed_by_pair = ys == y;
  for (const auto& t : enumerate_transitions(spec, x)) {
    if (t.next == y) out.forward += t.probability;
    if (t.next == ys) out.swapped += t.probability;
  }
  out.holds = out.forward == out.swapped;
  return out;
}

namespace detail {

// Part of the record that the refined chain exposes: the chosen position pair
// for adjacent transpositions, the removed position for random-to-random.
inline int refinement_key(const StepRecord& r) {
  if (const auto* a = std::get_if<AdjacentSwap>(&r)) return a->position;
  if (const auto* m = std::get_if<RemoveInsert>(&r)) return m->from;
  return 0;
}

inline Placement half_step(const ProcessSpec& spec, const Placement& x, const SweepMove& m) {
  return Placement{right_sweep(x.vertex, m.right, spec.n)};
}

}  // namespace detail

struct EventCheck {
  InteractionCheck symmetry;  // in the refined chain
  bool twin_ok = false;       // twin record has equal probability and the swapped outcome
};

// Validates one emitted event in the record-refined chain.
inline EventCheck check_event(const ProcessSpec& spec, const ProcessState& x, const StepRecord& record,
                              const InteractionEvent& e) {
  const int n = spec.n;
  const auto swap = Permutation::transposition(n, e.pair.i, e.pair.j);
  EventCheck out;
  if (e.kind == EventKind::kOvertake) {
    // Cards sweep independently: compare the half-step kernels.
    const auto& m = std::get<SweepMove>(record);
    const auto& pl = std::get<Placement>(x);
    const Placement from = e.phase == Phase::kRightSweep ? pl : detail::half_step(spec, pl, m);
    const auto& d = e.phase == Phase::kRightSweep ? m.right : m.left;
    const Placement to{e.phase == Phase::kRightSweep ? detail::right_sweep(from.vertex, d, n) : detail::left_sweep(from.vertex, d)};
    const auto to_swapped = std::get<Placement>(relabel_state(swap, to));
    auto kernel = [&](const Placement& target) {
      std::vector<int> disp(n);
      for (int l = 0; l < n; ++l) disp[l] = std::abs(target.vertex[l] - from.vertex[l]);
      return e.phase == Phase::kRightSweep ? detail::right_sweep_probability(spec.p, from.vertex, disp, n)
                                           : detail::left_sweep_probability(spec.p, from.vertex, disp);
    };
    out.symmetry.forward = kernel(to);
    out.symmetry.swapped = kernel(to_swapped);
    out.symmetry.fixed_by_pair = to_swapped == to;
  } else {
    const ProcessState y = apply_record(spec, x, record);
    const ProcessState ys = relabel_state(swap, y);
    const int key = detail::refinement_key(record);
    out.symmetry.fixed_by_pair = ys == y;
    if (out.symmetry.fixed_by_pair) {
      // First clause: both sides are the same target, no enumeration needed.
      out.symmetry.forward = out.symmetry.swapped = record_probability(spec, x, record);
    } else {
      for (const auto& t : enumerate_transitions(spec, x)) {
        if (detail::refinement_key(t.record) != key) continue;
        if (t.next == y) out.symmetry.forward += t.probability;
        if (t.next == ys) out.symmetry.swapped += t.probability;
      }
    }
  }
  out.symmetry.holds = out.symmetry.forward == out.symmetry.swapped && out.symmetry.forward > 0;

  if (fixes_state(e.kind)) {
    out.twin_ok = out.symmetry.fixed_by_pair;
  } else {
    const StepRecord twin = twin_record(spec, x, record, e);
    const Rational pt = record_probability(spec, x, twin);
    if (pt == record_probability(spec, x, record) && pt > 0) {
      out.twin_ok = apply_record(spec, x, twin) == relabel_state(swap, apply_record(spec, x, record));
    }
  }
  return out;
}

struct DetectorReport {
  std::size_t states = 0;
  std::size_t events = 0;
  std::size_t violations = 0;
  std::size_t first_clause = 0;
};

// Every event from every reachable state and record.
inline DetectorReport check_detectors(const ProcessSpec& spec) {
  DetectorReport rep;
  for (const auto& x : reachable_states(process_kernel(spec), spec.n, canonical_start(spec))) {
    ++rep.states;
    for (const auto& t : enumerate_transitions(spec, x)) {
      for (const auto& e : step_events(spec, x, t.record, t.next, 1)) {
        ++rep.events;
        auto c = check_event(spec, x, t.record, e);
        if (!c.symmetry.holds || !c.twin_ok) ++rep.violations;
        if (c.symmetry.fixed_by_pair) ++rep.first_clause;
      }
    }
  }
  return rep;
}

// ---- jumbled label sets -----------------------------------------------------------

inline bool check_jumbled(const std::map<Permutation, Rational>& law, const std::vector<int>& labels) {
  if (law.empty()) return true;
  const int n = law.begin()->first.size();
  for (std::size_t a = 0; a < labels.size(); ++a)
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      const auto g = Permutation::transposition(n, labels[a], labels[b]);
      for (const auto& [pi, p] : law) {
        auto it = law.find(compose(g, pi));
        if ((it == law.end() ? Rational(0) : it->second) != p) return false;
      }
    }
  return true;
}

struct PileJumbleReport {
  bool jumbled = true;
  std::size_t piles_checked = 0;
};

// For each placement, the deck law conditioned on it must be invariant under
// reordering each pile's labels.
inline PileJumbleReport check_piles_jumbled(const OrderedLaw& law) {
  std::map<Placement, std::map<Permutation, Rational>> by_placement;
  for (const auto& [s, p] : law) by_placement[placement_of(s)][ordered_deck(s)] += p;
  PileJumbleReport rep;
  for (const auto& [pl, decks] : by_placement)
    for (const auto& pile : piles(pl)) {
      if (pile.size() < 2) continue;
      ++rep.piles_checked;
      if (!check_jumbled(decks, pile)) rep.jumbled = false;
    }
  return rep;
}

}  // namespace mutime
