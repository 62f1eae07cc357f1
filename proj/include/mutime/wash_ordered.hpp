#pragma once

// Wash models with explicitly ordered piles. These follow the table-top
// description literally (insertion slots, riffle merges) and serve as the
// reference for the position-only wash chains in process.hpp.

#include "mutime/process.hpp"

#include <map>

namespace mutime {

// piles[v] lists the cards at vertex v, top card first.
struct OrderedWash {
  std::vector<std::vector<int>> piles;
  auto operator<=>(const OrderedWash&) const = default;
};

using OrderedLaw = std::map<OrderedWash, Rational>;

inline OrderedWash ordered_start(int n) {
  OrderedWash s{std::vector<std::vector<int>>(n)};
  for (int c = 1; c <= n; ++c) s.piles[c - 1] = {c};
  return s;
}

inline Placement placement_of(const OrderedWash& s) {
  int n = 0;
  for (const auto& p : s.piles) n += static_cast<int>(p.size());
  Placement pl{std::vector<int>(n)};
  for (int v = 0; v < static_cast<int>(s.piles.size()); ++v)
    for (int c : s.piles[v]) pl.vertex[c - 1] = v;
  return pl;
}

inline Permutation ordered_deck(const OrderedWash& s) {
  std::vector<int> deck;
  for (const auto& p : s.piles) deck.insert(deck.end(), p.begin(), p.end());
  return Permutation(std::move(deck));
}

// ---- Shuffle 1 with insertion slots ----------------------------------------

struct OrderedWashMove {
  int card = 1;
  int move = 0;  // -1, 0, +1
  int slot = 0;  // 0 = top of the destination pile
};

struct OrderedTransition {
  OrderedWash next;
  Rational probability;
};

// Slot is uniform over (destination pile size + 1) when the card changes
// position; a held card keeps its place in its pile.
inline Rational ordered_move_probability(const OrderedWash& s, const OrderedWashMove& m) {
  const int n = static_cast<int>(s.piles.size());
  const int v = placement_of(s).vertex[m.card - 1];
  Rational p = Rational(1, n) * (m.move == 0 ? Rational(1, 2) : Rational(1, 4));
  const int dest = v + m.move;
  if (m.move == 0 || dest < 0 || dest >= n) return m.slot == 0 ? p : Rational(0);
  const int size = static_cast<int>(s.piles[dest].size());
  if (m.slot < 0 || m.slot > size) return 0;
  return p / (size + 1);
}

inline OrderedWash ordered_apply(const OrderedWash& s, const OrderedWashMove& m) {
  const int n = static_cast<int>(s.piles.size());
  const int v = placement_of(s).vertex[m.card - 1];
  const int dest = v + m.move;
  if (m.move == 0 || dest < 0 || dest >= n) return s;
  OrderedWash out = s;
  auto& from = out.piles[v];
  from.erase(std::find(from.begin(), from.end(), m.card));
  auto& to = out.piles[dest];
  to.insert(to.begin() + m.slot, m.card);
  return out;
}

inline std::vector<OrderedTransition> ordered_wash1d_transitions(const OrderedWash& s) {
  std::vector<OrderedTransition> out;
  const int n = static_cast<int>(s.piles.size());
  for (int c = 1; c <= n; ++c)
    for (int mv : {-1, 0, 1})
      for (int slot = 0; slot <= n; ++slot) {
        OrderedWashMove m{c, mv, slot};
        Rational p = ordered_move_probability(s, m);
        if (p > 0) out.push_back({ordered_apply(s, m), p});
      }
  return out;
}

// ---- Shuffle 2 ---------------------------------------------------------------------

// Every interleaving of a over b keeping both orders, each with probability 1/C(a+b, a).
inline std::vector<std::pair<std::vector<int>, Rational>> riffle_merges(const std::vector<int>& a,
                                                                        const std::vector<int>& b) {
  std::vector<std::pair<std::vector<int>, Rational>> out;
  const std::size_t total = a.size() + b.size();
  std::vector<bool> from_a(total, false);
  std::fill(from_a.begin(), from_a.begin() + static_cast<long>(a.size()), true);
  std::sort(from_a.begin(), from_a.end());
  std::vector<std::vector<int>> merged;
  do {
    std::vector<int> m;
    std::size_t ia = 0, ib = 0;
    for (bool t : from_a) m.push_back(t ? a[ia++] : b[ib++]);
    merged.push_back(std::move(m));
  } while (std::next_permutation(from_a.begin(), from_a.end()));
  for (auto& m : merged) out.emplace_back(std::move(m), Rational(1, static_cast<long long>(merged.size())));
  return out;
}

using OrderedBranches = std::vector<std::pair<OrderedWash, Rational>>;

namespace detail {

inline OrderedWash mirror(OrderedWash s) {
  std::reverse(s.piles.begin(), s.piles.end());
  return s;
}

// Right sweep, position by position. Cards arriving at a vertex split into those
// that stop there and those that carry on; each group is riffled with the
// resident cards that stay or leave respectively. d holds capped displacements.
inline OrderedBranches riffle_sweep_right(const OrderedWash& s, const std::vector<int>& d) {
  const int n = static_cast<int>(s.piles.size());
  struct Partial {
    OrderedWash state;
    std::vector<int> carried;
    Rational p;
  };
  std::vector<int> rem = d;
  std::vector<Partial> cur{{OrderedWash{std::vector<std::vector<int>>(n)}, {}, 1}};
  for (int v = 0; v < n; ++v) {
    std::vector<Partial> next;
    for (auto& part : cur) {
      std::vector<int> stop, go;
      for (int c : part.carried) (rem[c - 1] == 0 ? stop : go).push_back(c);
      std::vector<int> stay, leave;
      for (int c : s.piles[v]) (rem[c - 1] == 0 ? stay : leave).push_back(c);
      for (auto& [pile, p1] : riffle_merges(stop, stay))
        for (auto& [moving, p2] : riffle_merges(go, leave)) {
          Partial np{part.state, moving, part.p * p1 * p2};
          np.state.piles[v] = pile;
          next.push_back(std::move(np));
        }
    }
    // Carried cards use up one unit of displacement on the way to v + 1.
    std::vector<char> touched(rem.size(), 0);
    for (const auto& part : next)
      for (int c : part.carried) touched[c - 1] = 1;
    for (std::size_t c = 0; c < rem.size(); ++c)
      if (touched[c]) --rem[c];
    cur = std::move(next);
  }
  OrderedBranches out;
  for (auto& part : cur) {
    if (!part.carried.empty()) throw std::logic_error("sweep carried cards past the end");
    out.emplace_back(std::move(part.state), part.p);
  }
  return out;
}

// Moving cards leave together and are then dropped one at a time, in label
// order, into a uniform slot of their destination pile.
inline OrderedBranches insertion_sweep_right(const OrderedWash& s, const std::vector<int>& d) {
  const int n = static_cast<int>(s.piles.size());
  const auto pl = placement_of(s);
  OrderedWash base = s;
  for (auto& pile : base.piles) std::erase_if(pile, [&](int c) { return d[c - 1] > 0; });
  OrderedBranches cur{{base, 1}};
  for (int c = 1; c <= static_cast<int>(d.size()); ++c) {
    if (d[c - 1] == 0) continue;
    const int dest = std::min(pl.vertex[c - 1] + d[c - 1], n - 1);
    OrderedBranches next;
    for (const auto& [st, p] : cur) {
      const int size = static_cast<int>(st.piles[dest].size());
      for (int slot = 0; slot <= size; ++slot) {
        OrderedWash e = st;
        e.piles[dest].insert(e.piles[dest].begin() + slot, c);
        next.emplace_back(std::move(e), p / (size + 1));
      }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace detail

enum class MergeRule { kRiffle, kInsertion };

// One full step (right sweep, then left sweep) for a fixed displacement record.
inline OrderedBranches ordered_sweep_step(const OrderedWash& s, const SweepMove& m, MergeRule rule) {
  auto sweep = [&](const OrderedWash& st, const std::vector<int>& d) {
    return rule == MergeRule::kRiffle ? detail::riffle_sweep_right(st, d) : detail::insertion_sweep_right(st, d);
  };
  OrderedBranches out;
  for (const auto& [half, p1] : sweep(s, m.right))
    for (const auto& [mirrored, p2] : sweep(detail::mirror(half), m.left))
      out.emplace_back(detail::mirror(mirrored), p1 * p2);
  return out;
}

inline std::vector<OrderedTransition> ordered_wash1d_long_transitions(const ProcessSpec& spec, const OrderedWash& s,
                                                                      MergeRule rule) {
  std::map<OrderedWash, Rational> acc;
  for (const auto& t : enumerate_transitions(spec, placement_of(s))) {
    for (const auto& [next, p] : ordered_sweep_step(s, std::get<SweepMove>(t.record), rule))
      acc[next] += t.probability * p;
  }
  std::vector<OrderedTransition> out;
  for (auto& [st, p] : acc) out.push_back({st, p});
  return out;
}

// Exact law after t steps of the ordered chain, from the canonical start.
inline OrderedLaw ordered_law(const ProcessSpec& spec, int t, MergeRule rule = MergeRule::kRiffle) {
  if (spec.family != Family::kWash1d && spec.family != Family::kWash1dLong)
    throw std::invalid_argument("ordered piles are modelled for wash1d and wash1d-long only");
  OrderedLaw law{{ordered_start(spec.n), 1}};
  for (int step = 0; step < t; ++step) {
    OrderedLaw next;
    for (const auto& [s, p] : law) {
      auto ts = spec.family == Family::kWash1d ? ordered_wash1d_transitions(s)
                                               : ordered_wash1d_long_transitions(spec, s, rule);
      for (const auto& tr : ts) next[tr.next] += p * tr.probability;
    }
    law = std::move(next);
  }
  return law;
}

inline std::map<Permutation, Rational> deck_law(const OrderedLaw& law) {
  std::map<Permutation, Rational> out;
  for (const auto& [s, p] : law) out[ordered_deck(s)] += p;
  return out;
}

}  // namespace mutime
