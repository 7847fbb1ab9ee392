#pragma once

// Hilbert symbols (a, b)_v over Q by the local formulas.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kummer/arith.hpp"

namespace kummer {

// A place of Q: a prime p, or the real place (p == 0).
struct Place {
  u64 p = 0;
  static Place infinity() { return {0}; }
  static Place prime(u64 p) { return {p}; }
  bool is_infinite() const { return p == 0; }
  bool operator==(const Place&) const = default;
  std::string str() const { return is_infinite() ? "inf" : std::to_string(p); }
};

struct Rational {
  i64 num = 0;
  i64 den = 1;
};

// Legendre symbol (u/p) for odd prime p, p not dividing u.
inline int legendre(i64 u, u64 p) {
  const u64 a = reduce(u, p);
  if (a == 0) return 0;
  return powmod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
}

namespace detail {

// a = p^v * u with p not dividing u.
inline std::pair<unsigned, i64> split_valuation(i64 a, u64 p) {
  unsigned v = 0;
  const i64 pp = static_cast<i64>(p);
  while (a % pp == 0) {
    a /= pp;
    ++v;
  }
  return {v, a};
}

}  // namespace detail

inline int hilbert_symbol(i64 a, i64 b, Place place) {
  if (a == 0 || b == 0) throw DomainError("hilbert_symbol: arguments must be nonzero");
  if (place.is_infinite()) return (a < 0 && b < 0) ? -1 : 1;
  const u64 p = place.p;
  if (!is_prime(p)) throw DomainError("hilbert_symbol: " + std::to_string(p) + " is not prime");
  const auto [alpha, u] = detail::split_valuation(a, p);
  const auto [beta, v] = detail::split_valuation(b, p);
  if (p == 2) {
    auto eps = [](i64 x) { return static_cast<int>(reduce(x, 4) == 3); };
    auto omega = [](i64 x) {
      const u64 m = reduce(x, 8);
      return static_cast<int>(m == 3 || m == 5);
    };
    const int e = eps(u) * eps(v) + static_cast<int>(alpha) * omega(v) + static_cast<int>(beta) * omega(u);
    return (e % 2 == 0) ? 1 : -1;
  }
  int s = ((alpha * beta) % 2 == 1 && (p % 4 == 3)) ? -1 : 1;
  if (beta % 2 == 1) s *= legendre(u, p);
  if (alpha % 2 == 1) s *= legendre(v, p);
  return s;
}

// (n/d, b) = (n d, b) since d^2 is a square.
inline int hilbert_symbol(Rational a, Rational b, Place place) {
  if (a.num == 0 || b.num == 0 || a.den == 0 || b.den == 0) throw DomainError("hilbert_symbol: zero or undefined rational");
  const i128 x = static_cast<i128>(a.num) * a.den;
  const i128 y = static_cast<i128>(b.num) * b.den;
  if (x > INT64_MAX || x < INT64_MIN || y > INT64_MAX || y < INT64_MIN) throw RangeError("hilbert_symbol: rational too large");
  return hilbert_symbol(static_cast<i64>(x), static_cast<i64>(y), place);
}

// Places where (a, b)_v can differ from 1: infinity, 2, and odd p | ab.
inline std::vector<Place> relevant_places(i64 a, i64 b) {
  std::vector<Place> out{Place::infinity(), Place::prime(2)};
  auto add = [&](i64 x) {
    for (u64 p : prime_divisors(static_cast<u64>(x < 0 ? -x : x))) {
      bool dup = false;
      for (const auto& pl : out) dup = dup || pl.p == p;
      if (!dup) out.push_back(Place::prime(p));
    }
  };
  add(a);
  add(b);
  return out;
}

// Product of (a, b)_v over all places; 1 by reciprocity.
inline int hilbert_product(i64 a, i64 b) {
  int s = 1;
  for (const auto& v : relevant_places(a, b)) s *= hilbert_symbol(a, b, v);
  return s;
}

// Whether q is a local norm from Q(sqrt a) at every place, i.e. the conic
// y^2 - a z^2 = q is everywhere locally soluble. Returns the first failing
// place if any.
inline std::optional<Place> conic_local_obstruction(i64 a, i64 q) {
  for (const auto& v : relevant_places(a, q)) {
    if (hilbert_symbol(a, q, v) != 1) return v;
  }
  return std::nullopt;
}

}  // namespace kummer
