#pragma once

// Paths: an initial state, one record per step and, for wash models, the
// final pile collection. Replay is deterministic.

#include "mutime/process.hpp"

#include <functional>

namespace mutime {

struct Path {
  ProcessSpec spec;
  ProcessState initial;
  std::vector<StepRecord> steps;
  std::optional<Collection> collection;  // wash families only

  int length() const { return static_cast<int>(steps.size()); }
  auto operator<=>(const Path& o) const {
    if (auto c = initial <=> o.initial; c != 0) return c;
    if (auto c = steps <=> o.steps; c != 0) return c;
    return collection <=> o.collection;
  }
  bool operator==(const Path& o) const { return (*this <=> o) == 0; }
};

struct Replay {
  std::vector<ProcessState> states;                  // x_0 .. x_t
  std::vector<std::vector<InteractionEvent>> events;  // events[s-1] for step s
  Rational probability;
  Permutation end;
};

inline Replay replay(const Path& path) {
  Replay r{{path.initial}, {}, 1, Permutation::identity(path.spec.n)};
  for (int s = 1; s <= path.length(); ++s) {
    const auto& rec = path.steps[s - 1];
    r.probability *= record_probability(path.spec, r.states.back(), rec);
    auto step = replay_step(path.spec, r.states.back(), rec, s);
    r.states.push_back(std::move(step.next));
    r.events.push_back(std::move(step.events));
  }
  if (is_wash(path.spec.family)) {
    if (!path.collection) throw std::invalid_argument("wash path needs a final collection");
    r.probability *= collection_probability(*path.collection);
  }
  r.end = project(path.spec, r.states.back(), path.collection);
  return r;
}

inline Rational probability(const Path& path) { return replay(path).probability; }
inline Permutation end_permutation(const Path& path) { return replay(path).end; }

inline std::vector<InteractionEvent> event_trace(const Replay& r) {
  std::vector<InteractionEvent> out;
  for (const auto& es : r.events) out.insert(out.end(), es.begin(), es.end());
  return out;
}

// Calls visit(path, probability) for every positive-probability path of length t
// from the canonical start.
inline void for_each_path(const ProcessSpec& spec, int t, const std::function<void(const Path&, const Rational&)>& visit,
                          std::size_t guard = 5'000'000) {
  std::size_t count = 0;
  Path path{spec, canonical_start(spec), {}, std::nullopt};
  std::function<void(const ProcessState&, const Rational&)> rec = [&](const ProcessState& x, const Rational& p) {
    if (path.length() == t) {
      if (is_wash(spec.family)) {
        for (auto& c : enumerate_collections(std::get<Placement>(x))) {
          if (++count > guard) throw EnumerationGuard("path enumeration exceeds guard");
          path.collection = c;
          visit(path, p * collection_probability(c));
        }
        path.collection.reset();
      } else {
        if (++count > guard) throw EnumerationGuard("path enumeration exceeds guard");
        visit(path, p);
      }
      return;
    }
    for (const auto& tr : enumerate_transitions(spec, x)) {
      path.steps.push_back(tr.record);
      rec(tr.next, p * tr.probability);
      path.steps.pop_back();
    }
  };
  rec(path.initial, 1);
}

inline std::vector<Path> enumerate_paths(const ProcessSpec& spec, int t, std::size_t guard = 5'000'000) {
  std::vector<Path> out;
  for_each_path(spec, t, [&](const Path& p, const Rational&) { out.push_back(p); }, guard);
  return out;
}

}  // namespace mutime
