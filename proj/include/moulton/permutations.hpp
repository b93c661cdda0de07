#pragma once

// Orderings of bodies on the oriented line.
//
// An Ordering is stored as a place -> body map with 1-based body labels:
// places()[p] is the body at place p+1 counting from the left. The cone of
// configurations with this ordering is { x : r_{s(1)} < ... < r_{s(N)} }.

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "moulton/core.hpp"
#include "moulton/error.hpp"

namespace moulton {

class Ordering {
 public:
  explicit Ordering(std::vector<int> places) : places_(std::move(places)) { validate(); }
  Ordering(std::initializer_list<int> places) : Ordering(std::vector<int>(places)) {}

  static Ordering identity(std::size_t n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 1);
    return Ordering(std::move(p));
  }

  std::size_t size() const noexcept { return places_.size(); }

  /// Body at the given place, both 1-based.
  int operator()(std::size_t place) const { return places_.at(place - 1); }

  const std::vector<int>& places() const noexcept { return places_; }

  /// Body -> place map as an Ordering (the inverse permutation).
  Ordering inverse() const {
    std::vector<int> inv(places_.size());
    for (std::size_t p = 0; p < places_.size(); ++p) {
      inv[static_cast<std::size_t>(places_[p] - 1)] = static_cast<int>(p + 1);
    }
    return Ordering(std::move(inv));
  }

  friend bool operator==(const Ordering&, const Ordering&) = default;
  friend auto operator<=>(const Ordering&, const Ordering&) = default;

 private:
  void validate() const {
    const auto n = static_cast<int>(places_.size());
    if (n < 1) throw Error(ErrorKind::InvalidArgument, "empty ordering");
    std::vector<bool> seen(places_.size(), false);
    for (int b : places_) {
      if (b < 1 || b > n || seen[static_cast<std::size_t>(b - 1)]) {
        throw Error(ErrorKind::InvalidArgument,
                    "ordering must be a permutation of 1.." + std::to_string(n));
      }
      seen[static_cast<std::size_t>(b - 1)] = true;
    }
  }

  std::vector<int> places_;
};

/// "2,1,3"
inline std::string to_string(const Ordering& s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s.places()[i]);
  }
  return out;
}

inline Ordering parse_ordering(std::string_view text) {
  std::vector<int> places;
  std::string item;
  std::stringstream ss{std::string(text)};
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      places.push_back(v);
    } catch (const std::logic_error&) {
      throw Error(ErrorKind::InvalidArgument, "bad ordering entry '" + item + "'");
    }
  }
  return Ordering(std::move(places));
}

/// Largest N accepted by enumerate_orderings (9! = 362880 orderings).
inline constexpr std::size_t kMaxEnumerationSize = 9;

/// All N! orderings in lexicographic order.
inline std::vector<Ordering> enumerate_orderings(std::size_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "N must be positive");
  if (n > kMaxEnumerationSize) {
    throw Error(ErrorKind::SizeLimit, "enumeration limited to N <= " +
                                          std::to_string(kMaxEnumerationSize));
  }
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  std::vector<Ordering> out;
  do {
    out.emplace_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

/// Mirror image: reverse(s)(k) = s(N + 1 - k).
inline Ordering reverse(const Ordering& s) {
  std::vector<int> p(s.places().rbegin(), s.places().rend());
  return Ordering(std::move(p));
}

/// Value mirror: mirror(s)(k) = N + 1 - s(k). For place -> body maps this
/// relabels bodies; for body -> place maps it reflects the line, so
/// mirror(s.inverse()) == reverse(s).inverse().
inline Ordering mirror(const Ordering& s) {
  const auto n = static_cast<int>(s.size());
  std::vector<int> p(s.places());
  for (int& v : p) v = n + 1 - v;
  return Ordering(std::move(p));
}

/// Lexicographically smaller of s and reverse(s).
inline Ordering canonical_class(const Ordering& s) {
  Ordering r = reverse(s);
  return r < s ? r : s;
}

/// One representative per reversal class, N!/2 of them, in lexicographic order.
inline std::vector<Ordering> canonical_classes(std::size_t n) {
  std::vector<Ordering> out;
  for (auto& s : enumerate_orderings(n)) {
    if (canonical_class(s) == s) out.push_back(std::move(s));
  }
  return out;
}

/// True iff every configuration in the cone of `extended` projects, on its first
/// base.size() coordinates, into the cone of `base`.
inline bool is_compatible(const Ordering& extended, const Ordering& base) {
  if (extended.size() < base.size()) {
    throw Error(ErrorKind::SizeMismatch, "extended ordering is shorter than the base ordering");
  }
  const auto n = static_cast<int>(base.size());
  // Bodies 1..n, read left to right in `extended`, must appear in base order.
  std::size_t next = 0;
  for (int body : extended.places()) {
    if (body > n) continue;
    if (body != base.places()[next]) return false;
    ++next;
  }
  return true;
}

/// Ordering of bodies 1..n as they appear left to right in a larger ordering.
inline Ordering restrict_to_first(const Ordering& extended, std::size_t n) {
  std::vector<int> p;
  for (int body : extended.places()) {
    if (body <= static_cast<int>(n)) p.push_back(body);
  }
  return Ordering(std::move(p));
}

/// Left-to-right ordering of a collision-free configuration.
inline Ordering ordering_of(const Configuration& x) {
  std::vector<int> p(x.size());
  std::iota(p.begin(), p.end(), 1);
  std::stable_sort(p.begin(), p.end(), [&](int a, int b) {
    return x[static_cast<std::size_t>(a - 1)] < x[static_cast<std::size_t>(b - 1)];
  });
  return Ordering(std::move(p));
}

/// Strict membership of x in the cone of s.
inline bool in_cone(const Configuration& x, const Ordering& s) {
  if (x.size() != s.size()) return false;
  for (std::size_t p = 1; p < s.size(); ++p) {
    if (!(x[static_cast<std::size_t>(s(p) - 1)] < x[static_cast<std::size_t>(s(p + 1) - 1)])) {
      return false;
    }
  }
  return true;
}

/// s(i) is strictly between s(j) and s(k); indices are 1-based.
inline bool is_between(const Ordering& s, std::size_t i, std::size_t j, std::size_t k) {
  const int a = s(i), b = s(j), c = s(k);
  return (b < a && a < c) || (c < a && a < b);
}

struct TrichotomyResult {
  enum class Tag { Equal, Reversed, Witness };
  Tag tag = Tag::Equal;
  std::size_t i = 0, j = 0, k = 0;  // set only for Witness

  friend bool operator==(const TrichotomyResult&, const TrichotomyResult&) = default;
};

inline std::string to_string(const TrichotomyResult& t) {
  switch (t.tag) {
    case TrichotomyResult::Tag::Equal: return "Equal";
    case TrichotomyResult::Tag::Reversed: return "Reversed";
    case TrichotomyResult::Tag::Witness:
      return "Witness(" + std::to_string(t.i) + "," + std::to_string(t.j) + "," +
             std::to_string(t.k) + ")";
  }
  return "";
}

/// Equal, Reversed, or the lexicographically first (i, j, k) with s(i) between
/// s(j) and s(k) while t(i) is not between t(j) and t(k).
///
/// Betweenness compares values, so it cannot separate s from mirror(t); that
/// is the Reversed branch. Applied to body -> place maps (inverses), Reversed
/// means the two orderings are reflections of each other on the line.
inline TrichotomyResult betweenness_witness(const Ordering& s, const Ordering& t) {
  if (s.size() != t.size()) throw Error(ErrorKind::SizeMismatch, "orderings differ in size");
  if (s == t) return {TrichotomyResult::Tag::Equal};
  if (s == mirror(t)) return {TrichotomyResult::Tag::Reversed};
  const std::size_t n = s.size();
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      for (std::size_t k = 1; k <= n; ++k) {
        if (is_between(s, i, j, k) && !is_between(t, i, j, k)) {
          return {TrichotomyResult::Tag::Witness, i, j, k};
        }
      }
    }
  }
  // Unreachable for valid permutations: only monotone bijections avoid a witness.
  throw Error(ErrorKind::InvalidArgument, "no betweenness witness for " + to_string(s) +
                                              " vs " + to_string(t));
}

}  // namespace moulton
