#pragma once

// Factorizations of permutations into transpositions.
//
// Products are read with the perm-core convention: the product s_1 s_2 ... s_m
// is compose(s_1, compose(s_2, ...)), so s_m acts first.

#include "mutime/permutation.hpp"
#include "mutime/rng.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mutime {

class IncompleteSequence : public std::invalid_argument {
 public:
  IncompleteSequence() : std::invalid_argument("incomplete generating sequence") {}
};

class StateSpaceTooLarge : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Restricted star form pi = (1 a_1)(2 a_2)...(n a_n) with 1 <= a_i <= i.
struct StarVector {
  int n = 0;
  std::vector<int> a;  // a[i-1] holds a_i

  StarVector() = default;
  StarVector(int size, std::vector<int> entries) : n(size), a(std::move(entries)) {
    if (static_cast<int>(a.size()) != n) throw std::invalid_argument("star vector length differs from n");
    for (int i = 1; i <= n; ++i)
      if (a[i - 1] < 1 || a[i - 1] > i) throw std::invalid_argument("star vector needs 1 <= a_i <= i");
  }
  bool operator==(const StarVector&) const = default;
};

inline Permutation evaluate_star(const StarVector& v) {
  Permutation out = Permutation::identity(v.n);
  for (int i = v.n; i >= 1; --i)
    if (v.a[i - 1] != i) out = compose(Permutation::transposition(v.n, i, v.a[i - 1]), out);
  return out;
}

// Peels factors from the right: with pi = sigma (n a_n) and sigma fixing n, a_n = pi^{-1}(n).
inline StarVector star_factor(const Permutation& pi) {
  const int n = pi.size();
  std::vector<int> a(n);
  Permutation rest = pi;
  for (int i = n; i >= 1; --i) {
    const int ai = invert(rest)(i);
    a[i - 1] = ai;
    if (ai != i) rest = compose(rest, Permutation::transposition(n, i, ai));
  }
  return StarVector(n, std::move(a));
}

struct TranspositionSequence {
  int n = 0;
  std::vector<Transposition> seq;

  TranspositionSequence() = default;
  TranspositionSequence(int size, std::vector<Transposition> s) : n(size), seq(std::move(s)) {
    for (const auto& t : seq)
      if (t.j > n) throw std::out_of_range("transposition label exceeds n");
  }

  // Each of the C(n,2) transpositions once, in a uniformly random order.
  static TranspositionSequence shuffled_distinct(int n, Rng& rng) {
    auto s = all_transpositions(n);
    for (int k = static_cast<int>(s.size()) - 1; k > 0; --k) std::swap(s[k], s[uniform_int(rng, 0, k)]);
    return {n, std::move(s)};
  }

  bool covers_all() const {
    std::vector<char> seen(static_cast<std::size_t>(n) * static_cast<std::size_t>(n + 1), 0);
    int distinct = 0;
    for (const auto& t : seq) {
      char& s = seen[static_cast<std::size_t>(t.i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(t.j - 1)];
      if (!s) {
        s = 1;
        ++distinct;
      }
    }
    return distinct == n * (n - 1) / 2;
  }

  std::size_t size() const { return seq.size(); }
};

struct SubsequenceMask {
  std::vector<bool> eps;
  bool operator==(const SubsequenceMask&) const = default;
};

inline Permutation evaluate_subsequence(const TranspositionSequence& s, const SubsequenceMask& mask) {
  if (mask.eps.size() != s.seq.size()) throw std::invalid_argument("mask length differs from sequence length");
  Permutation out = Permutation::identity(s.n);
  for (std::size_t k = s.seq.size(); k-- > 0;)
    if (mask.eps[k]) out = compose(s.seq[k].as_permutation(s.n), out);
  return out;
}

// Running products r_0 = sigma, r_k = s_k^{eps_k} r_{k-1}; the greedy picks
// s_k exactly when left-multiplying shortens r_{k-1}. r_m is the identity
// whenever the sequence contains every transposition.
struct GreedyWalk {
  SubsequenceMask mask;
  std::vector<Permutation> running;  // r_0 .. r_m
};

inline GreedyWalk greedy_walk(const TranspositionSequence& s, const Permutation& sigma) {
  if (sigma.size() != s.n) throw SizeMismatch("permutation size differs from sequence n");
  GreedyWalk w;
  w.mask.eps.assign(s.seq.size(), false);
  w.running.reserve(s.seq.size() + 1);
  w.running.push_back(sigma);
  Permutation r = sigma;
  for (std::size_t k = 0; k < s.seq.size(); ++k) {
    if (length_decreases(r, s.seq[k])) {
      r = compose(s.seq[k].as_permutation(s.n), r);
      w.mask.eps[k] = true;
    }
    w.running.push_back(r);
  }
  return w;
}

inline SubsequenceMask greedy_subsequence_factor(const TranspositionSequence& s, const Permutation& sigma) {
  if (!s.covers_all()) throw IncompleteSequence();
  GreedyWalk w = greedy_walk(s, sigma);
  if (!w.running.back().is_identity())
    throw std::logic_error("greedy factorization did not reach the identity");
  return w.mask;
}

// Set of subsequence products over S_n, n <= 8, grown one factor at a time by
// R_k = R_{k-1} u R_{k-1} s_k.
class ReachableSet {
 public:
  static constexpr int kMaxN = 8;

  explicit ReachableSet(int n) : n_(n) {
    if (n > kMaxN) throw StateSpaceTooLarge("state space too large for exact reachable set");
    present_.assign(factorial(n), 0);
    insert(Permutation::identity(n));
  }

  void extend(const Transposition& t) {
    const std::size_t before = members_.size();
    for (std::size_t k = 0; k < before; ++k) {
      std::vector<int> m = members_[k].map();
      std::swap(m[t.i - 1], m[t.j - 1]);  // right multiplication by t
      insert(Permutation(std::move(m)));
    }
  }

  bool spans() const { return members_.size() == present_.size(); }
  std::size_t size() const { return members_.size(); }
  bool contains(const Permutation& p) const { return present_[rank(p)] != 0; }
  const std::vector<Permutation>& members() const { return members_; }

 private:
  void insert(Permutation p) {
    auto r = rank(p);
    if (!present_[r]) {
      present_[r] = 1;
      members_.push_back(std::move(p));
    }
  }

  int n_;
  std::vector<char> present_;
  std::vector<Permutation> members_;
};

inline std::vector<Permutation> reachable_set(const TranspositionSequence& s) {
  ReachableSet r(s.n);
  for (const auto& t : s.seq) r.extend(t);
  std::vector<Permutation> out = r.members();
  std::sort(out.begin(), out.end());
  return out;
}

// Shortest prefix length whose subsequence products cover all of S_n.
inline std::optional<std::size_t> min_spanning_prefix(const TranspositionSequence& s) {
  ReachableSet r(s.n);
  if (r.spans()) return 0;
  for (std::size_t k = 0; k < s.seq.size(); ++k) {
    r.extend(s.seq[k]);
    if (r.spans()) return k + 1;
  }
  return std::nullopt;
}

struct SpanningSample {
  std::size_t min_spanning_prefix = 0;
  std::size_t coupon_collector_steps = 0;  // prefix length at which every transposition has appeared
};

// Draws i.i.d. uniform transpositions until the prefix spans S_n and contains
// every transposition.
inline SpanningSample sample_spanning(int n, Rng& rng) {
  const auto pool = all_transpositions(n);
  const int pairs = static_cast<int>(pool.size());
  ReachableSet r(n);
  std::vector<char> seen(pool.size(), 0);
  int distinct = 0;
  SpanningSample out;
  bool spanned = r.spans();
  bool collected = pairs == 0;
  std::size_t k = 0;
  while (!spanned || !collected) {
    const int pick = uniform_int(rng, 0, pairs - 1);
    ++k;
    r.extend(pool[pick]);
    if (!seen[pick]) {
      seen[pick] = 1;
      if (++distinct == pairs) {
        collected = true;
        out.coupon_collector_steps = k;
      }
    }
    if (!spanned && r.spans()) {
      spanned = true;
      out.min_spanning_prefix = k;
    }
  }
  return out;
}

}  // namespace mutime
