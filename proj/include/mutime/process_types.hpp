#pragma once

// Value types shared by every shuffling process: the process description,
// states, the per-step randomness records, interaction events and the final
// pile collection of the wash models.
//
// Wash states record only where each card lies. Within a pile the order is
// uniform and independent of everything else (each pile is jumbled), so it is
// drawn once, when the piles are gathered, as a Collection. The literal
// ordered-pile implementations in wash_ordered.hpp produce the same law on
// decks and are used to check that equivalence.

#include "mutime/permutation.hpp"
#include "mutime/rational.hpp"

#include <compare>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace mutime {

enum class Family {
  kWash1d,
  kWash1dLong,
  kWashGrid,
  kAdjTransposition,
  kCycleTransposition,
  kRandomToRandom,
  kRandomToTop,
};

inline const std::vector<Family>& all_families() {
  static const std::vector<Family> kAll = {Family::kWash1d,          Family::kWash1dLong,
                                           Family::kWashGrid,        Family::kAdjTransposition,
                                           Family::kCycleTransposition, Family::kRandomToRandom,
                                           Family::kRandomToTop};
  return kAll;
}

inline std::string family_name(Family f) {
  switch (f) {
    case Family::kWash1d: return "wash1d";
    case Family::kWash1dLong: return "wash1d-long";
    case Family::kWashGrid: return "wash-grid";
    case Family::kAdjTransposition: return "adj-transposition";
    case Family::kCycleTransposition: return "cycle-transposition";
    case Family::kRandomToRandom: return "random-to-random";
    case Family::kRandomToTop: return "random-to-top";
  }
  return "?";
}

inline Family parse_family(const std::string& name) {
  for (Family f : all_families())
    if (family_name(f) == name) return f;
  throw std::invalid_argument("unknown family '" + name + "'");
}

inline bool is_wash(Family f) {
  return f == Family::kWash1d || f == Family::kWash1dLong || f == Family::kWashGrid;
}

struct ProcessSpec {
  Family family = Family::kWash1d;
  int n = 3;
  Rational p = Rational(1, 2);  // wash1d-long sweep parameter, 0 < p < 1
  int dim = 1;                  // wash-grid dimension

  ProcessSpec() = default;
  ProcessSpec(Family f, int size) : family(f), n(size) { validate(); }
  ProcessSpec(Family f, int size, Rational sweep_p, int grid_dim = 1)
      : family(f), n(size), p(std::move(sweep_p)), dim(grid_dim) {
    validate();
  }

  void validate() const {
    if (n < 1) throw std::invalid_argument("deck size must be at least 1");
    if (family == Family::kWash1dLong && (p <= 0 || p >= 1))
      throw std::invalid_argument("wash1d-long needs 0 < p < 1");
    if (family == Family::kWashGrid && dim < 1) throw std::invalid_argument("wash-grid needs dimension >= 1");
    if ((family == Family::kAdjTransposition || family == Family::kCycleTransposition) && n < 2)
      throw std::invalid_argument(family_name(family) + " needs n >= 2");
  }

  // Number of table positions for wash models.
  int vertices() const {
    if (family != Family::kWashGrid) return n;
    long long v = 1;
    for (int k = 0; k < dim; ++k) {
      v *= n;
      if (v > (1LL << 30)) throw std::invalid_argument("grid too large");
    }
    return static_cast<int>(v);
  }

  bool operator==(const ProcessSpec&) const = default;
};

// Wash state: vertex[label-1] is the 0-based table position of that card.
struct Placement {
  std::vector<int> vertex;
  auto operator<=>(const Placement&) const = default;
};

using ProcessState = std::variant<Placement, Permutation>;

// ---- step records -------------------------------------------------------

// wash1d: move in {-1, 0, +1}. wash-grid: move 0 stays, k >= 1 picks the k-th
// existing neighbour in increasing vertex order.
struct WashMove {
  int card = 1;
  int move = 0;
  auto operator<=>(const WashMove&) const = default;
};

// wash1d-long: effective displacements per label (index label-1) after the
// boundary stop, for the right sweep and then the left sweep.
struct SweepMove {
  std::vector<int> right;
  std::vector<int> left;
  auto operator<=>(const SweepMove&) const = default;
};

// Lazy adjacent transposition: chosen pair of positions (position, position+1).
struct AdjacentSwap {
  int position = 1;
  bool swap = false;
  auto operator<=>(const AdjacentSwap&) const = default;
};

enum class Generator { kIdentity, kCycle, kTopSwap };

struct GeneratorMove {
  Generator gen = Generator::kIdentity;
  auto operator<=>(const GeneratorMove&) const = default;
};

// Random-to-random: card at position `from` is removed and ends at position `to`.
struct RemoveInsert {
  int from = 1;
  int to = 1;
  auto operator<=>(const RemoveInsert&) const = default;
};

struct MoveToTop {
  int position = 1;
  auto operator<=>(const MoveToTop&) const = default;
};

using StepRecord = std::variant<WashMove, SweepMove, AdjacentSwap, GeneratorMove, RemoveInsert, MoveToTop>;

// ---- interaction events ---------------------------------------------------

// Sub-step at which an event happens. Only wash1d-long uses the sweeps; every
// other event sits at the end of its step. The enum order is the time order.
enum class Phase { kRightSweep, kLeftSweep, kStep };

enum class EventKind { kSamePile, kOvertake, kAdjacentPairChosen, kTopTwo, kInsertedAbove };

inline std::string kind_name(EventKind k) {
  switch (k) {
    case EventKind::kSamePile: return "same-pile";
    case EventKind::kOvertake: return "overtake";
    case EventKind::kAdjacentPairChosen: return "adjacent-pair-chosen";
    case EventKind::kTopTwo: return "top-two";
    case EventKind::kInsertedAbove: return "inserted-above";
  }
  return "?";
}

// sweep events are two-sided (the realized step has an equally likely twin);
// same-pile events are one-sided: the state itself is fixed by the swap.
inline bool fixes_state(EventKind k) { return k == EventKind::kSamePile; }

struct InteractionEvent {
  int time = 1;  // 1-based step index
  Phase phase = Phase::kStep;
  Transposition pair;
  EventKind kind = EventKind::kSamePile;

  auto operator<=>(const InteractionEvent&) const = default;
};

// ---- pile collection --------------------------------------------------------

// Non-empty piles in vertex order, each listed top card first.
struct Collection {
  std::vector<std::vector<int>> piles;
  auto operator<=>(const Collection&) const = default;
};

// ---- label action -----------------------------------------------------------

inline ProcessState relabel_state(const Permutation& g, const ProcessState& s) {
  if (const auto* pl = std::get_if<Placement>(&s)) {
    Placement out{std::vector<int>(pl->vertex.size())};
    for (int l = 1; l <= static_cast<int>(pl->vertex.size()); ++l) out.vertex[g(l) - 1] = pl->vertex[l - 1];
    return out;
  }
  return compose(g, std::get<Permutation>(s));
}

// Walk records name positions, which the label action leaves alone.
inline StepRecord relabel_record(const Permutation& g, const StepRecord& r) {
  if (const auto* w = std::get_if<WashMove>(&r)) return WashMove{g(w->card), w->move};
  if (const auto* s = std::get_if<SweepMove>(&r)) {
    SweepMove out{std::vector<int>(s->right.size()), std::vector<int>(s->left.size())};
    for (int l = 1; l <= static_cast<int>(s->right.size()); ++l) {
      out.right[g(l) - 1] = s->right[l - 1];
      out.left[g(l) - 1] = s->left[l - 1];
    }
    return out;
  }
  return r;
}

inline Collection relabel_collection(const Permutation& g, Collection c) {
  for (auto& pile : c.piles)
    for (int& l : pile) l = g(l);
  return c;
}

inline std::string to_string(const StepRecord& r) {
  struct V {
    std::string operator()(const WashMove& m) const {
      return "card " + std::to_string(m.card) + " move " + std::to_string(m.move);
    }
    std::string operator()(const SweepMove& m) const {
      std::string s = "right";
      for (int d : m.right) s += " " + std::to_string(d);
      s += " left";
      for (int d : m.left) s += " " + std::to_string(d);
      return s;
    }
    std::string operator()(const AdjacentSwap& m) const {
      return "pair " + std::to_string(m.position) + (m.swap ? " swap" : " hold");
    }
    std::string operator()(const GeneratorMove& m) const {
      return m.gen == Generator::kIdentity ? "id" : m.gen == Generator::kCycle ? "cycle" : "top-swap";
    }
    std::string operator()(const RemoveInsert& m) const {
      return "from " + std::to_string(m.from) + " to " + std::to_string(m.to);
    }
    std::string operator()(const MoveToTop& m) const { return "to-top " + std::to_string(m.position); }
  };
  return std::visit(V{}, r);
}

}  // namespace mutime
