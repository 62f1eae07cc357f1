#pragma once

// Dynamics of the seven shuffling processes: stepping, exact transition
// enumeration, interaction detectors and the twin records that certify them.

#include "mutime/process_types.hpp"
#include "mutime/rng.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

namespace mutime {

class RecordImpossible : public std::invalid_argument {
 public:
  RecordImpossible() : std::invalid_argument("record impossible in state") {}
};

class EnumerationGuard : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

inline std::vector<int> grid_coords(int v, int side, int dim) {
  std::vector<int> c(dim);
  for (int k = dim - 1; k >= 0; --k) {
    c[k] = v % side;
    v /= side;
  }
  return c;
}

inline int grid_index(const std::vector<int>& c, int side) {
  int v = 0;
  for (int x : c) v = v * side + x;
  return v;
}

// Boundary-stopped geometric law: P(d) = (1-p)^d p for d < cap, tail mass at d = cap.
inline Rational stopped_geometric(const Rational& p, int d, int cap) {
  if (d < 0 || d > cap) return 0;
  Rational q = pow(Rational(1) - p, d);
  return d < cap ? q * p : q;
}

inline const Permutation& deck_of(const ProcessState& s) { return std::get<Permutation>(s); }
inline const Placement& placement_of(const ProcessState& s) { return std::get<Placement>(s); }

inline std::vector<int> right_sweep(const std::vector<int>& pos, const std::vector<int>& d, int n) {
  std::vector<int> out(pos.size());
  for (std::size_t l = 0; l < pos.size(); ++l) out[l] = std::min(pos[l] + d[l], n - 1);
  return out;
}

inline std::vector<int> left_sweep(const std::vector<int>& pos, const std::vector<int>& d) {
  std::vector<int> out(pos.size());
  for (std::size_t l = 0; l < pos.size(); ++l) out[l] = std::max(pos[l] - d[l], 0);
  return out;
}

inline bool sweep_feasible_right(const std::vector<int>& pos, const std::vector<int>& d, int n) {
  if (d.size() != pos.size()) return false;
  for (std::size_t l = 0; l < pos.size(); ++l)
    if (d[l] < 0 || pos[l] + d[l] > n - 1) return false;
  return true;
}

inline bool sweep_feasible_left(const std::vector<int>& pos, const std::vector<int>& d) {
  if (d.size() != pos.size()) return false;
  for (std::size_t l = 0; l < pos.size(); ++l)
    if (d[l] < 0 || pos[l] - d[l] < 0) return false;
  return true;
}

inline Rational right_sweep_probability(const Rational& p, const std::vector<int>& pos, const std::vector<int>& d,
                                        int n) {
  Rational out = 1;
  for (std::size_t l = 0; l < pos.size(); ++l) out *= stopped_geometric(p, d[l], n - 1 - pos[l]);
  return out;
}

inline Rational left_sweep_probability(const Rational& p, const std::vector<int>& pos, const std::vector<int>& d) {
  Rational out = 1;
  for (std::size_t l = 0; l < pos.size(); ++l) out *= stopped_geometric(p, d[l], pos[l]);
  return out;
}

// Pairs with a strictly left of b before the sweep and a at or right of b after.
inline void overtakes(const std::vector<int>& before, const std::vector<int>& after, int time, Phase phase,
                      std::vector<InteractionEvent>& out) {
  const int n = static_cast<int>(before.size());
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b) {
      const int ia = before[a - 1], ib = before[b - 1], ja = after[a - 1], jb = after[b - 1];
      if ((ia < ib && ja >= jb) || (ib < ia && jb >= ja)) out.push_back({time, phase, {a, b}, EventKind::kOvertake});
    }
}

inline void same_pile_events(const Placement& pl, int time, std::vector<InteractionEvent>& out) {
  const int n = static_cast<int>(pl.vertex.size());
  for (int a = 1; a <= n; ++a)
    for (int b = a + 1; b <= n; ++b)
      if (pl.vertex[a - 1] == pl.vertex[b - 1]) out.push_back({time, Phase::kStep, {a, b}, EventKind::kSamePile});
}

inline Permutation position_map_cycle(int n) {
  std::vector<int> m(n);
  for (int p = 1; p <= n; ++p) m[p - 1] = p % n + 1;
  return Permutation(std::move(m));
}

}  // namespace detail

// Neighbours of a grid vertex in increasing index order.
inline std::vector<int> grid_neighbors(const ProcessSpec& spec, int v) {
  std::vector<int> out;
  auto c = detail::grid_coords(v, spec.n, spec.dim);
  for (int k = 0; k < spec.dim; ++k)
    for (int delta : {-1, 1}) {
      auto d = c;
      d[k] += delta;
      if (d[k] >= 0 && d[k] < spec.n) out.push_back(detail::grid_index(d, spec.n));
    }
  std::sort(out.begin(), out.end());
  return out;
}

inline ProcessState canonical_start(const ProcessSpec& spec) {
  if (is_wash(spec.family)) {
    Placement pl{std::vector<int>(spec.n)};
    std::iota(pl.vertex.begin(), pl.vertex.end(), 0);  // lexicographic index i-1 holds card i
    return pl;
  }
  return Permutation::identity(spec.n);
}

// Non-empty piles in vertex order, labels ascending.
inline std::vector<std::vector<int>> piles(const Placement& pl) {
  std::vector<std::pair<int, int>> by_vertex;
  for (int l = 1; l <= static_cast<int>(pl.vertex.size()); ++l) by_vertex.emplace_back(pl.vertex[l - 1], l);
  std::sort(by_vertex.begin(), by_vertex.end());
  std::vector<std::vector<int>> out;
  for (std::size_t k = 0; k < by_vertex.size(); ++k) {
    if (k == 0 || by_vertex[k].first != by_vertex[k - 1].first) out.emplace_back();
    out.back().push_back(by_vertex[k].second);
  }
  return out;
}

// Closed-form probability of drawing `record` in `state`; zero when infeasible.
inline Rational record_probability(const ProcessSpec& spec, const ProcessState& state, const StepRecord& record) {
  const int n = spec.n;
  switch (spec.family) {
    case Family::kWash1d: {
      const auto* m = std::get_if<WashMove>(&record);
      if (!m || m->card < 1 || m->card > n || m->move < -1 || m->move > 1) return 0;
      return Rational(1, n) * (m->move == 0 ? Rational(1, 2) : Rational(1, 4));
    }
    case Family::kWashGrid: {
      const auto* m = std::get_if<WashMove>(&record);
      if (!m || m->card < 1 || m->card > n) return 0;
      if (m->move == 0) return Rational(1, 2 * n);
      const int deg = static_cast<int>(grid_neighbors(spec, detail::placement_of(state).vertex[m->card - 1]).size());
      if (m->move < 1 || m->move > deg) return 0;
      return Rational(1, 2 * n * deg);
    }
    case Family::kWash1dLong: {
      const auto* m = std::get_if<SweepMove>(&record);
      const auto& pos = detail::placement_of(state).vertex;
      if (!m || !detail::sweep_feasible_right(pos, m->right, n)) return 0;
      auto half = detail::right_sweep(pos, m->right, n);
      if (!detail::sweep_feasible_left(half, m->left)) return 0;
      return detail::right_sweep_probability(spec.p, pos, m->right, n) *
             detail::left_sweep_probability(spec.p, half, m->left);
    }
    case Family::kAdjTransposition: {
      const auto* m = std::get_if<AdjacentSwap>(&record);
      if (!m || m->position < 1 || m->position > n - 1) return 0;
      return Rational(1, 2 * (n - 1));
    }
    case Family::kCycleTransposition:
      return std::holds_alternative<GeneratorMove>(record) ? Rational(1, 3) : Rational(0);
    case Family::kRandomToRandom: {
      const auto* m = std::get_if<RemoveInsert>(&record);
      if (!m || m->from < 1 || m->from > n || m->to < 1 || m->to > n) return 0;
      return Rational(1, n * n);
    }
    case Family::kRandomToTop: {
      const auto* m = std::get_if<MoveToTop>(&record);
      if (!m || m->position < 1 || m->position > n) return 0;
      return Rational(1, n);
    }
  }
  return 0;
}

// Next state for a feasible record.
inline ProcessState apply_record(const ProcessSpec& spec, const ProcessState& state, const StepRecord& record) {
  const int n = spec.n;
  switch (spec.family) {
    case Family::kWash1d: {
      const auto& m = std::get<WashMove>(record);
      Placement pl = detail::placement_of(state);
      int& v = pl.vertex[m.card - 1];
      if (v + m.move >= 0 && v + m.move < n) v += m.move;  // moves off the table are held
      return pl;
    }
    case Family::kWashGrid: {
      const auto& m = std::get<WashMove>(record);
      Placement pl = detail::placement_of(state);
      if (m.move > 0) pl.vertex[m.card - 1] = grid_neighbors(spec, pl.vertex[m.card - 1])[m.move - 1];
      return pl;
    }
    case Family::kWash1dLong: {
      const auto& m = std::get<SweepMove>(record);
      const auto& pos = detail::placement_of(state).vertex;
      return Placement{detail::left_sweep(detail::right_sweep(pos, m.right, n), m.left)};
    }
    case Family::kAdjTransposition: {
      const auto& m = std::get<AdjacentSwap>(record);
      Permutation d = detail::deck_of(state);
      if (!m.swap) return d;
      return compose(d, Permutation::transposition(n, m.position, m.position + 1));
    }
    case Family::kCycleTransposition: {
      const auto& m = std::get<GeneratorMove>(record);
      const Permutation& d = detail::deck_of(state);
      if (m.gen == Generator::kIdentity) return d;
      if (m.gen == Generator::kTopSwap) return compose(d, Permutation::transposition(n, 1, 2));
      return compose(d, detail::position_map_cycle(n));
    }
    case Family::kRandomToRandom: {
      const auto& m = std::get<RemoveInsert>(record);
      std::vector<int> cards = detail::deck_of(state).map();
      const int c = cards[m.from - 1];
      cards.erase(cards.begin() + (m.from - 1));
      cards.insert(cards.begin() + (m.to - 1), c);
      return Permutation(std::move(cards));
    }
    case Family::kRandomToTop: {
      const auto& m = std::get<MoveToTop>(record);
      std::vector<int> cards = detail::deck_of(state).map();
      const int c = cards[m.position - 1];
      cards.erase(cards.begin() + (m.position - 1));
      cards.insert(cards.begin(), c);
      return Permutation(std::move(cards));
    }
  }
  return state;
}

// Interaction events of one step, in time order and then lexicographic pair order.
inline std::vector<InteractionEvent> step_events(const ProcessSpec& spec, const ProcessState& before,
                                                 const StepRecord& record, const ProcessState& after, int time) {
  std::vector<InteractionEvent> out;
  switch (spec.family) {
    case Family::kWash1d:
    case Family::kWashGrid:
      detail::same_pile_events(detail::placement_of(after), time, out);
      break;
    case Family::kWash1dLong: {
      const auto& m = std::get<SweepMove>(record);
      const auto& pos = detail::placement_of(before).vertex;
      auto half = detail::right_sweep(pos, m.right, spec.n);
      detail::overtakes(pos, half, time, Phase::kRightSweep, out);
      detail::overtakes(half, detail::placement_of(after).vertex, time, Phase::kLeftSweep, out);
      detail::same_pile_events(detail::placement_of(after), time, out);
      break;
    }
    case Family::kAdjTransposition: {
      const auto& m = std::get<AdjacentSwap>(record);
      const auto& d = detail::deck_of(before);
      out.push_back({time, Phase::kStep, {d(m.position), d(m.position + 1)}, EventKind::kAdjacentPairChosen});
      break;
    }
    case Family::kCycleTransposition: {
      const auto& m = std::get<GeneratorMove>(record);
      const auto& d = detail::deck_of(before);
      if (m.gen != Generator::kCycle) out.push_back({time, Phase::kStep, {d(1), d(2)}, EventKind::kTopTwo});
      break;
    }
    case Family::kRandomToRandom: {
      const auto& m = std::get<RemoveInsert>(record);
      const auto& d = detail::deck_of(after);
      if (m.to < spec.n) out.push_back({time, Phase::kStep, {d(m.to), d(m.to + 1)}, EventKind::kInsertedAbove});
      break;
    }
    case Family::kRandomToTop:
      break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

struct StepResult {
  ProcessState next;
  std::vector<InteractionEvent> events;
};

inline StepResult replay_step(const ProcessSpec& spec, const ProcessState& state, const StepRecord& record,
                              int time = 1) {
  if (record_probability(spec, state, record) == 0) throw RecordImpossible();
  ProcessState next = apply_record(spec, state, record);
  auto events = step_events(spec, state, record, next, time);
  return {std::move(next), std::move(events)};
}

// Draws a record with its closed-form probability.
inline StepRecord sample_record(const ProcessSpec& spec, const ProcessState& state, Rng& rng) {
  const int n = spec.n;
  switch (spec.family) {
    case Family::kWash1d: {
      const int card = uniform_int(rng, 1, n);
      const int u = uniform_int(rng, 0, 3);
      return WashMove{card, u == 0 ? 1 : u == 1 ? -1 : 0};
    }
    case Family::kWashGrid: {
      const int card = uniform_int(rng, 1, n);
      if (uniform_int(rng, 0, 1) == 0) return WashMove{card, 0};
      const int deg =
          static_cast<int>(grid_neighbors(spec, detail::placement_of(state).vertex[card - 1]).size());
      return WashMove{card, deg == 0 ? 0 : uniform_int(rng, 1, deg)};
    }
    case Family::kWash1dLong: {
      const double p = to_double(spec.p);
      const auto& pos = detail::placement_of(state).vertex;
      SweepMove m{std::vector<int>(n), std::vector<int>(n)};
      for (int l = 0; l < n; ++l) m.right[l] = std::min(geometric(rng, p), n - 1 - pos[l]);
      auto half = detail::right_sweep(pos, m.right, n);
      for (int l = 0; l < n; ++l) m.left[l] = std::min(geometric(rng, p), half[l]);
      return m;
    }
    case Family::kAdjTransposition: {
      const int k = uniform_int(rng, 1, n - 1);
      return AdjacentSwap{k, uniform_int(rng, 0, 1) == 1};
    }
    case Family::kCycleTransposition:
      return GeneratorMove{static_cast<Generator>(uniform_int(rng, 0, 2))};
    case Family::kRandomToRandom: {
      const int from = uniform_int(rng, 1, n);
      return RemoveInsert{from, uniform_int(rng, 1, n)};
    }
    case Family::kRandomToTop:
      return MoveToTop{uniform_int(rng, 1, n)};
  }
  return MoveToTop{};
}

struct SampledStep {
  StepRecord record;
  ProcessState next;
  std::vector<InteractionEvent> events;
};

inline SampledStep sample_step(const ProcessSpec& spec, const ProcessState& state, Rng& rng, int time = 1) {
  StepRecord r = sample_record(spec, state, rng);
  ProcessState next = apply_record(spec, state, r);
  auto events = step_events(spec, state, r, next, time);
  return {std::move(r), std::move(next), std::move(events)};
}

struct Transition {
  StepRecord record;
  ProcessState next;
  Rational probability;
};

// Every positive-probability record from `state`.
inline std::vector<Transition> enumerate_transitions(const ProcessSpec& spec, const ProcessState& state,
                                                     std::size_t max_records = 2'000'000) {
  const int n = spec.n;
  std::vector<StepRecord> records;
  switch (spec.family) {
    case Family::kWash1d:
      for (int c = 1; c <= n; ++c)
        for (int mv : {-1, 0, 1}) records.push_back(WashMove{c, mv});
      break;
    case Family::kWashGrid:
      for (int c = 1; c <= n; ++c) {
        const int deg = static_cast<int>(grid_neighbors(spec, detail::placement_of(state).vertex[c - 1]).size());
        for (int mv = 0; mv <= deg; ++mv) records.push_back(WashMove{c, mv});
      }
      break;
    case Family::kWash1dLong: {
      const auto& pos = detail::placement_of(state).vertex;
      // Odometer over per-card displacement boxes, first the right sweep, then the left.
      auto box = [&](const std::vector<int>& caps, auto&& visit) {
        std::size_t count = 1;
        for (int c : caps) {
          count *= static_cast<std::size_t>(c + 1);
          if (count > max_records) throw EnumerationGuard("wash1d-long enumeration exceeds guard");
        }
        std::vector<int> d(caps.size(), 0);
        while (true) {
          visit(d);
          std::size_t k = 0;
          while (k < d.size() && d[k] == caps[k]) d[k++] = 0;
          if (k == d.size()) break;
          ++d[k];
        }
      };
      std::vector<int> right_caps(n);
      for (int l = 0; l < n; ++l) right_caps[l] = n - 1 - pos[l];
      box(right_caps, [&](const std::vector<int>& right) {
        auto half = detail::right_sweep(pos, right, n);
        box(half, [&](const std::vector<int>& left) {
          records.push_back(SweepMove{right, left});
          if (records.size() > max_records) throw EnumerationGuard("wash1d-long enumeration exceeds guard");
        });
      });
      break;
    }
    case Family::kAdjTransposition:
      for (int k = 1; k < n; ++k)
        for (bool s : {false, true}) records.push_back(AdjacentSwap{k, s});
      break;
    case Family::kCycleTransposition:
      for (Generator g : {Generator::kIdentity, Generator::kCycle, Generator::kTopSwap})
        records.push_back(GeneratorMove{g});
      break;
    case Family::kRandomToRandom:
      for (int f = 1; f <= n; ++f)
        for (int t = 1; t <= n; ++t) records.push_back(RemoveInsert{f, t});
      break;
    case Family::kRandomToTop:
      for (int p = 1; p <= n; ++p) records.push_back(MoveToTop{p});
      break;
  }
  if (records.size() > max_records) throw EnumerationGuard("transition enumeration exceeds guard");
  std::vector<Transition> out;
  out.reserve(records.size());
  for (auto& r : records) {
    Rational pr = record_probability(spec, state, r);
    if (pr == 0) continue;
    ProcessState next = apply_record(spec, state, r);
    out.push_back({std::move(r), std::move(next), std::move(pr)});
  }
  return out;
}

// Record of equal probability whose outcome is the pair-relabelled outcome of
// `record` (for the whole step). Exists for every two-sided event the detectors emit; same-pile
// events need no twin because the pair already fixes the state.
inline StepRecord twin_record(const ProcessSpec& spec, const ProcessState& before, const StepRecord& record,
                              const InteractionEvent& event) {
  switch (event.kind) {
    case EventKind::kSamePile:
      return record;
    case EventKind::kAdjacentPairChosen: {
      auto m = std::get<AdjacentSwap>(record);
      m.swap = !m.swap;
      return m;
    }
    case EventKind::kTopTwo: {
      auto m = std::get<GeneratorMove>(record);
      if (m.gen == Generator::kCycle) throw std::logic_error("top-two event on a cycle step");
      m.gen = m.gen == Generator::kIdentity ? Generator::kTopSwap : Generator::kIdentity;
      return m;
    }
    case EventKind::kInsertedAbove: {
      auto m = std::get<RemoveInsert>(record);
      ++m.to;
      return m;
    }
    case EventKind::kOvertake: {
      auto m = std::get<SweepMove>(record);
      const auto& pos0 = detail::placement_of(before).vertex;
      const bool right = event.phase == Phase::kRightSweep;
      const std::vector<int> pos = right ? pos0 : detail::right_sweep(pos0, m.right, spec.n);
      auto& d = right ? m.right : m.left;
      int a = event.pair.i, b = event.pair.j;
      // `trail` is the card that catches up: the left one when sweeping right.
      int trail = pos[a - 1] < pos[b - 1] ? a : b, lead = trail == a ? b : a;
      if (!right) std::swap(trail, lead);
      const int gap = std::abs(pos[b - 1] - pos[a - 1]);
      const int dt = d[trail - 1], dl = d[lead - 1];
      d[trail - 1] = dl + gap;
      d[lead - 1] = dt - gap;
      // The left sweep follows the right one inside the same step, so the pair's roles swap there too.
      if (right) std::swap(m.left[a - 1], m.left[b - 1]);
      return m;
    }
  }
  return record;
}

// ---- collections -------------------------------------------------------------

inline Collection sorted_collection(const Placement& pl) { return Collection{piles(pl)}; }

inline Rational collection_probability(const Collection& c) {
  Rational out = 1;
  for (const auto& pile : c.piles) out /= Rational(static_cast<long long>(factorial(static_cast<int>(pile.size()))));
  return out;
}

inline bool collection_matches(const Placement& pl, const Collection& c) {
  auto ps = piles(pl);
  if (ps.size() != c.piles.size()) return false;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    auto sorted = c.piles[k];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != ps[k]) return false;
  }
  return true;
}

inline Collection sample_collection(const Placement& pl, Rng& rng) {
  Collection c = sorted_collection(pl);
  for (auto& pile : c.piles)
    for (int k = static_cast<int>(pile.size()) - 1; k > 0; --k) std::swap(pile[k], pile[uniform_int(rng, 0, k)]);
  return c;
}

inline std::vector<Collection> enumerate_collections(const Placement& pl) {
  std::vector<Collection> out{Collection{}};
  for (auto pile : piles(pl)) {
    std::vector<Collection> next;
    do {
      for (const auto& c : out) {
        Collection e = c;
        e.piles.push_back(pile);
        next.push_back(std::move(e));
      }
    } while (std::next_permutation(pile.begin(), pile.end()));
    out = std::move(next);
  }
  return out;
}

// Deck obtained by stacking the gathered piles, the pile at the lowest vertex on top.
inline Permutation project(const ProcessSpec& spec, const ProcessState& state,
                           const std::optional<Collection>& collection = std::nullopt) {
  if (!is_wash(spec.family)) return detail::deck_of(state);
  const auto& pl = detail::placement_of(state);
  Collection c = collection ? *collection : sorted_collection(pl);
  if (!collection_matches(pl, c)) throw std::invalid_argument("collection does not match the piles");
  std::vector<int> deck;
  for (const auto& pile : c.piles) deck.insert(deck.end(), pile.begin(), pile.end());
  return Permutation(std::move(deck));
}

}  // namespace mutime
