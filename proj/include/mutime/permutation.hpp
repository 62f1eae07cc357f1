#pragma once

// Permutations of {1..n}.
//
// A Permutation is stored as the map position -> label: map()[p-1] is the
// label of the card at position p. Both positions and labels are 1-based.
//
// Composition convention, used by every other header:
//
//     compose(a, b)(x) == a(b(x))      ("apply b first, then a")
//
// The label action of g on a deck d relabels values, (g . d)[p] = g(d[p]),
// which is compose(g, d). Moving cards between positions is right
// composition: compose(d, s) puts the card from position s(p) at position p.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mutime {

class SizeMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class Permutation {
 public:
  Permutation() = default;

  explicit Permutation(std::vector<int> map) : map_(std::move(map)) {
    const int n = size();
    std::vector<char> seen(n + 1, 0);
    for (int v : map_) {
      if (v < 1 || v > n || seen[v]) throw std::invalid_argument("not a permutation of 1.." + std::to_string(n));
      seen[v] = 1;
    }
  }

  static Permutation identity(int n) {
    if (n < 0) throw std::invalid_argument("negative deck size");
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 1);
    return Permutation(std::move(m), Unchecked{});
  }

  static Permutation transposition(int n, int i, int j) {
    if (i < 1 || j < 1 || i > n || j > n) throw std::out_of_range("transposition label out of range");
    Permutation p = identity(n);
    std::swap(p.map_[i - 1], p.map_[j - 1]);
    return p;
  }

  // Product of the given cycles, each read as a -> next(a).
  static Permutation from_cycles(int n, const std::vector<std::vector<int>>& cycles) {
    std::vector<int> m(n);
    std::iota(m.begin(), m.end(), 1);
    std::vector<char> used(n + 1, 0);
    for (const auto& cyc : cycles) {
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        int a = cyc[k];
        if (a < 1 || a > n || used[a]) throw std::invalid_argument("cycles are not disjoint labels in 1..n");
        used[a] = 1;
        m[a - 1] = cyc[(k + 1) % cyc.size()];
      }
    }
    return Permutation(std::move(m), Unchecked{});
  }

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int x) const { return map_[x - 1]; }
  const std::vector<int>& map() const { return map_; }
  bool is_identity() const {
    for (int p = 0; p < size(); ++p)
      if (map_[p] != p + 1) return false;
    return true;
  }

  auto operator<=>(const Permutation&) const = default;

 private:
  struct Unchecked {};
  Permutation(std::vector<int> map, Unchecked) : map_(std::move(map)) {}
  friend Permutation compose(const Permutation&, const Permutation&);
  friend Permutation invert(const Permutation&);

  std::vector<int> map_;
};

inline Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size())
    throw SizeMismatch("incompatible deck sizes " + std::to_string(a.size()) + " and " + std::to_string(b.size()));
  std::vector<int> m(a.size());
  for (int x = 1; x <= a.size(); ++x) m[x - 1] = a(b(x));
  return Permutation(std::move(m), Permutation::Unchecked{});
}

inline Permutation invert(const Permutation& a) {
  std::vector<int> m(a.size());
  for (int x = 1; x <= a.size(); ++x) m[a(x) - 1] = x;
  return Permutation(std::move(m), Permutation::Unchecked{});
}

// Unordered label pair, stored with i < j.
struct Transposition {
  int i = 1;
  int j = 2;

  Transposition() = default;
  Transposition(int a, int b) : i(std::min(a, b)), j(std::max(a, b)) {
    if (a == b) throw std::invalid_argument("transposition needs two distinct labels");
    if (i < 1) throw std::out_of_range("transposition label below 1");
  }

  Permutation as_permutation(int n) const { return Permutation::transposition(n, i, j); }
  auto operator<=>(const Transposition&) const = default;
};

// All C(n,2) transpositions in lexicographic order.
inline std::vector<Transposition> all_transpositions(int n) {
  std::vector<Transposition> out;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) out.emplace_back(i, j);
  return out;
}

struct CycleDecomposition {
  int n = 0;
  std::vector<std::vector<int>> cycles;  // each starts at its minimum; sorted by minimum

  Permutation reconstruct() const { return Permutation::from_cycles(n, cycles); }
  bool operator==(const CycleDecomposition&) const = default;
};

inline CycleDecomposition cycles(const Permutation& a) {
  CycleDecomposition out{a.size(), {}};
  std::vector<char> seen(a.size() + 1, 0);
  for (int start = 1; start <= a.size(); ++start) {
    if (seen[start]) continue;
    std::vector<int> cyc;
    for (int x = start; !seen[x]; x = a(x)) {
      seen[x] = 1;
      cyc.push_back(x);
    }
    out.cycles.push_back(std::move(cyc));
  }
  return out;
}

inline int cycle_count(const Permutation& a) {
  int count = 0;
  std::vector<char> seen(a.size() + 1, 0);
  for (int start = 1; start <= a.size(); ++start) {
    if (seen[start]) continue;
    ++count;
    for (int x = start; !seen[x]; x = a(x)) seen[x] = 1;
  }
  return count;
}

// Word length over all transpositions: n minus the number of cycles.
inline int cayley_length(const Permutation& a) { return a.size() - cycle_count(a); }

inline bool same_cycle(const Permutation& a, int i, int j) {
  for (int x = a(i); x != i; x = a(x))
    if (x == j) return true;
  return false;
}

// Multiplying a by t on either side lowers the length exactly when t's labels
// share a cycle of a; otherwise it raises it by one.
inline bool length_decreases(const Permutation& a, const Transposition& t) {
  if (t.j > a.size()) throw std::out_of_range("transposition label exceeds deck size");
  return same_cycle(a, t.i, t.j);
}

inline std::string to_string(const Permutation& a) {
  std::ostringstream os;
  os << '[';
  for (int p = 0; p < a.size(); ++p) os << (p ? "," : "") << a.map()[p];
  os << ']';
  return os.str();
}

inline std::string to_string(const CycleDecomposition& c) {
  std::ostringstream os;
  for (const auto& cyc : c.cycles) {
    os << '(';
    for (std::size_t k = 0; k < cyc.size(); ++k) os << (k ? " " : "") << cyc[k];
    os << ')';
  }
  return os.str();
}

inline std::string to_string(const Transposition& t) {
  return "(" + std::to_string(t.i) + " " + std::to_string(t.j) + ")";
}

// Accepts "[2,1,3]", "2,1,3" or "2 1 3".
inline Permutation parse_permutation(const std::string& text) {
  std::vector<int> m;
  std::string token;
  auto flush = [&] {
    if (!token.empty()) m.push_back(std::stoi(token));
    token.clear();
  };
  for (char c : text) {
    if (c >= '0' && c <= '9') token += c;
    else if (c == ',' || c == ' ' || c == '[' || c == ']' || c == '\t') flush();
    else throw std::invalid_argument("unexpected character in permutation: '" + text + "'");
  }
  flush();
  return Permutation(std::move(m));
}

// Lehmer-code rank in [0, n!), lexicographic over map().
inline std::uint64_t rank(const Permutation& a) {
  const int n = a.size();
  std::uint64_t r = 0;
  std::vector<char> used(n + 1, 0);
  for (int p = 0; p < n; ++p) {
    int smaller = 0;
    for (int v = 1; v < a.map()[p]; ++v)
      if (!used[v]) ++smaller;
    used[a.map()[p]] = 1;
    r = r * static_cast<std::uint64_t>(n - p) + static_cast<std::uint64_t>(smaller);
  }
  return r;
}

inline std::uint64_t factorial(int n) {
  std::uint64_t f = 1;
  for (int k = 2; k <= n; ++k) f *= static_cast<std::uint64_t>(k);
  return f;
}

inline Permutation unrank(int n, std::uint64_t r) {
  std::vector<int> digits(n);
  for (int p = n - 1; p >= 0; --p) {
    const auto base = static_cast<std::uint64_t>(n - p);
    digits[p] = static_cast<int>(r % base);
    r /= base;
  }
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 1);
  std::vector<int> m(n);
  for (int p = 0; p < n; ++p) {
    m[p] = pool[digits[p]];
    pool.erase(pool.begin() + digits[p]);
  }
  return Permutation(std::move(m));
}

// Every element of S_n in lexicographic order.
inline std::vector<Permutation> all_permutations(int n) {
  std::vector<int> m(n);
  std::iota(m.begin(), m.end(), 1);
  std::vector<Permutation> out;
  do out.emplace_back(m);
  while (std::next_permutation(m.begin(), m.end()));
  return out;
}

}  // namespace mutime
