#pragma once

// Quadratic fields Q(sqrt a): discriminant, ramified primes, class numbers
// from reduced binary quadratic forms, and the sign of the fundamental
// unit's norm for real fields.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "kummer/arith.hpp"

namespace kummer {

struct BinaryForm {
  i64 A = 0;
  i64 B = 0;
  i64 C = 0;

  i64 discriminant() const { return B * B - 4 * A * C; }
  i64 operator()(i64 x, i64 y) const { return A * x * x + B * x * y + C * y * y; }
  bool primitive() const { return std::gcd(std::gcd(A, B), C) == 1; }
  auto operator<=>(const BinaryForm&) const = default;
};

// Positive definite (D < 0) reduction: |B| <= A <= C, B >= 0 on the boundary.
inline bool is_reduced_definite(const BinaryForm& f) {
  if (f.A <= 0 || f.discriminant() >= 0) return false;
  if (std::abs(f.B) > f.A || f.A > f.C) return false;
  if ((std::abs(f.B) == f.A || f.A == f.C) && f.B < 0) return false;
  return true;
}

// Primitive reduced positive definite forms of discriminant D < 0.
inline std::vector<BinaryForm> reduced_forms(i64 D) {
  if (D >= 0 || (((D % 4) + 4) % 4) > 1) throw DomainError("reduced_forms: D must be negative and 0 or 1 mod 4");
  std::vector<BinaryForm> out;
  for (i64 A = 1; 3 * A * A <= -D; ++A) {
    for (i64 B = -A + 1; B <= A; ++B) {
      if (((B - D) % 2) != 0) continue;
      const i64 num = B * B - D;
      if (num % (4 * A) != 0) continue;
      const BinaryForm f{A, B, num / (4 * A)};
      if (is_reduced_definite(f) && std::gcd(std::gcd(f.A, std::abs(f.B)), f.C) == 1) out.push_back(f);
    }
  }
  return out;
}

namespace detail {

inline i64 floor_div(i64 a, i64 b) {
  i64 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// Indefinite reduction: 0 < B < sqrt D and sqrt D - B < 2|A| < sqrt D + B.
inline bool is_reduced_indefinite(const BinaryForm& f, i64 D) {
  const i64 a2 = 2 * std::abs(f.A);
  if (f.B <= 0 || static_cast<i128>(f.B) * f.B >= D) return false;
  if (static_cast<i128>(a2 + f.B) * (a2 + f.B) <= D) return false;
  const i64 diff = a2 - f.B;
  return diff <= 0 || static_cast<i128>(diff) * diff < D;
}

// rho(A, B, C) = (C, B', (B'^2 - D) / 4C) with B' = -B (mod 2C) and
// sqrt D - 2|C| < B' < sqrt D.
inline BinaryForm rho(const BinaryForm& f, i64 D, i64 s) {
  const i64 m = 2 * std::abs(f.C);
  // largest B' <= s with B' = -B (mod m)
  const i64 target = ((-f.B) % m + m) % m;
  const i64 base = s - ((s - target) % m + m) % m;
  return {f.C, base, (base * base - D) / (4 * f.C)};
}

}  // namespace detail

// Number of rho-cycles of primitive reduced indefinite forms of
// discriminant D > 0 (nonsquare): the narrow class number of the order.
inline u64 narrow_class_number_real(i64 D) {
  if (D <= 0 || is_square(static_cast<u64>(D))) throw DomainError("narrow_class_number_real: D must be a positive nonsquare");
  const i64 s = static_cast<i64>(isqrt(static_cast<u64>(D)));
  std::set<BinaryForm> forms;
  for (i64 B = 1; B <= s; ++B) {
    if (((B - D) % 2) != 0) continue;
    const i64 num = B * B - D;  // = 4AC < 0
    for (i64 a = 1; 2 * a < s + B + 1; ++a) {
      if (num % (4 * a) != 0) continue;
      for (i64 A : {a, -a}) {
        const BinaryForm f{A, B, num / (4 * A)};
        if (detail::is_reduced_indefinite(f, D) &&
            std::gcd(std::gcd(std::abs(f.A), f.B), std::abs(f.C)) == 1) {
          forms.insert(f);
        }
      }
    }
  }
  u64 cycles = 0;
  std::set<BinaryForm> seen;
  for (const auto& start : forms) {
    if (seen.count(start)) continue;
    ++cycles;
    BinaryForm f = start;
    do {
      seen.insert(f);
      f = detail::rho(f, D, s);
      if (!forms.count(f)) throw InvariantViolation("narrow_class_number_real: rho left the reduced set");
    } while (!(f == start));
  }
  return cycles;
}

// Norm (+1 or -1) of the fundamental unit of the maximal order of Q(sqrt a),
// a > 1 squarefree: (-1)^(period length of the continued fraction of omega).
inline int fundamental_unit_norm(i64 a) {
  if (a <= 1) throw DomainError("fundamental_unit_norm: requires a > 1");
  const i64 s = static_cast<i64>(isqrt(static_cast<u64>(a)));
  // omega = (P + sqrt a) / Q with Q | a - P^2
  i64 P = (a % 4 == 1) ? 1 : 0;
  i64 Q = (a % 4 == 1) ? 2 : 1;
  std::map<std::pair<i64, i64>, int> seen;
  for (int step = 0;; ++step) {
    const i64 q = detail::floor_div(P + s, Q);
    P = q * Q - P;
    Q = (a - P * P) / Q;
    if (auto it = seen.find({P, Q}); it != seen.end()) return ((step - it->second) % 2 == 0) ? 1 : -1;
    seen.emplace(std::pair{P, Q}, step);
  }
}

struct QuadField {
  i64 a = 0;
  i64 D = 0;
  std::vector<u64> ramified;  // S: primes dividing D
  bool two_unramified = false;
  u64 h = 0;
  u64 h_plus = 0;
  std::optional<int> unit_norm;  // real fields only
};

inline bool is_squarefree_signed(i64 a) { return a != 0 && is_squarefree(static_cast<u64>(std::abs(a))); }

inline QuadField quad_field(i64 a) {
  if (a == 0 || a == 1) throw DomainError("quad_field: a must differ from 0 and 1");
  if (!is_squarefree_signed(a)) throw DomainError("quad_field: " + std::to_string(a) + " is not squarefree");
  QuadField f;
  f.a = a;
  const i64 amod4 = ((a % 4) + 4) % 4;
  f.two_unramified = amod4 == 1;
  f.D = f.two_unramified ? a : 4 * a;
  f.ramified = prime_divisors(static_cast<u64>(std::abs(f.D)));
  if (a < 0) {
    f.h = reduced_forms(f.D).size();
    f.h_plus = f.h;
  } else {
    f.unit_norm = fundamental_unit_norm(a);
    f.h_plus = narrow_class_number_real(f.D);
    f.h = (*f.unit_norm == 1) ? f.h_plus / 2 : f.h_plus;
  }
  return f;
}

// Squarefree d <= bound, d = 3 (mod 4), with Q(sqrt -d) of class number <= 2.
inline std::vector<u64> class_list(u64 bound) {
  std::vector<u64> out;
  for (u64 d = 3; d <= bound; d += 4) {
    if (!is_squarefree(d)) continue;
    if (quad_field(-static_cast<i64>(d)).h <= 2) out.push_back(d);
  }
  return out;
}

}  // namespace kummer
