#pragma once

// Points on X_{a,r,k}: y^2 - a z^2 = t^r + k != 0.
//
// The integral pipeline picks a primitive local point at each ramified
// prime, glues the residues of t into a congruence n = n0 (mod M0), looks
// for n with n^r + k = q prime, and then represents q by y^2 - a z^2. An
// independent direct search over small |t| serves as a cross-check.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kummer/arith.hpp"
#include "kummer/hilbert.hpp"
#include "kummer/parallel.hpp"
#include "kummer/quadratic_field.hpp"

namespace kummer {

struct VarietyInstance {
  i64 a = 0;
  unsigned r = 0;
  u64 k = 0;
  bool residues_admissible = false;  // p != 1 (mod r) for every p | a
  bool two_unramified = false;

  bool admissible() const { return residues_admissible && two_unramified; }
};

inline VarietyInstance make_variety(i64 a, unsigned r, u64 k) {
  if (!is_prime(r)) throw DomainError("make_variety: r = " + std::to_string(r) + " is not prime");
  if (k == 0) throw DomainError("make_variety: k must be positive");
  if (a == 0 || a == 1 || !is_squarefree_signed(a)) throw DomainError("make_variety: a must be squarefree and not 0 or 1");
  VarietyInstance v{a, r, k, true, ((a % 4) + 4) % 4 == 1};
  for (u64 p : prime_divisors(static_cast<u64>(std::abs(a)))) {
    if (p % r == 1) v.residues_admissible = false;
  }
  return v;
}

struct IntegralPoint {
  i64 y = 0;
  i64 z = 0;
  i64 t = 0;
  bool operator==(const IntegralPoint&) const = default;
};

inline std::optional<i128> signed_pow(i64 t, unsigned r) {
  const auto m = checked_pow(static_cast<u64>(t < 0 ? -static_cast<i128>(t) : t), r, kDomainMax);
  if (!m) return std::nullopt;
  const i128 v = static_cast<i128>(*m);
  return (t < 0 && r % 2 == 1) ? -v : v;
}

// Exact check of y^2 - a z^2 = t^r + k != 0.
inline bool verify_point(const IntegralPoint& pt, i64 a, unsigned r, u64 k) {
  const auto tr = signed_pow(pt.t, r);
  if (!tr) return false;
  const i128 rhs = *tr + static_cast<i128>(k);
  const i128 lhs = static_cast<i128>(pt.y) * pt.y - static_cast<i128>(a) * pt.z * pt.z;
  return rhs != 0 && lhs == rhs;
}

// sum c_i t^i mod m, coefficients in ascending degree.
inline u64 poly_eval_mod(const std::vector<i64>& coeffs, u64 t, u64 m) {
  u64 acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = (mulmod(acc, t % m, m) + reduce(*it, m)) % m;
  return acc;
}

inline std::vector<i64> poly_derivative(const std::vector<i64>& coeffs) {
  std::vector<i64> d;
  for (std::size_t i = 1; i < coeffs.size(); ++i) d.push_back(static_cast<i64>(i) * coeffs[i]);
  return d;
}

// Lift a simple root of f mod p to a root mod p^e congruent to root0.
inline u64 hensel_lift(const std::vector<i64>& coeffs, i64 root0, u64 p, unsigned e) {
  if (!is_prime(p)) throw DomainError("hensel_lift: modulus is not prime");
  if (e == 0) throw DomainError("hensel_lift: e must be >= 1");
  if (!checked_pow(p, e, u64{1} << 62)) throw RangeError("hensel_lift: p^e exceeds the working domain");
  u64 t = reduce(root0, p);
  if (poly_eval_mod(coeffs, t, p) != 0) throw DomainError("hensel_lift: root0 is not a root mod p");
  const auto inv = invmod(poly_eval_mod(poly_derivative(coeffs), t, p), p);
  if (!inv) throw LiftFailure("hensel_lift: f'(root0) = 0 (mod " + std::to_string(p) + "), root is not simple");
  u64 m = p;
  for (unsigned j = 1; j < e; ++j) {
    m *= p;
    const u64 correction = mulmod(poly_eval_mod(coeffs, t, m), *inv, m);
    t = (t + m - correction) % m;
  }
  return t;
}

enum class LocalRoute {
  kSquareOne,   // t^r + k = 1, k != 1 (mod p)
  kSquareFour,  // t^r + k = 4, k = 1 (mod p), p >= 5
  kYRoute,      // p = 3, k = 1 (mod 3): t = 0, y^2 = k
};

inline const char* to_string(LocalRoute r) {
  switch (r) {
    case LocalRoute::kSquareOne: return "square=1";
    case LocalRoute::kSquareFour: return "square=4";
    case LocalRoute::kYRoute: return "y^2=k";
  }
  return "?";
}

// t-bar^r + k - s = 0 (mod p) with s a nonzero square mod p.
struct LocalPoint {
  u64 p = 0;
  LocalRoute route = LocalRoute::kSquareOne;
  u64 square = 1;
  u64 t = 0;
  u64 y = 1;
};

// Unique r-th root of c mod p when gcd(r, p - 1) = 1.
inline u64 rth_root_bijective(u64 c, unsigned r, u64 p) {
  const auto d = invmod(r % (p - 1), p - 1);
  if (!d) throw DomainError("rth_root_bijective: u -> u^r is not a bijection mod " + std::to_string(p));
  return powmod(c, *d, p);
}

inline LocalPoint primitive_local_point(i64 a, unsigned r, u64 k, u64 p) {
  const VarietyInstance inst = make_variety(a, r, k);
  if (!inst.admissible()) throw PreconditionError("primitive_local_point: (a, r) is not admissible");
  const QuadField qf = quad_field(a);
  if (std::find(qf.ramified.begin(), qf.ramified.end(), p) == qf.ramified.end()) {
    throw PreconditionError("primitive_local_point: " + std::to_string(p) + " is not ramified in Q(sqrt a)");
  }
  LocalPoint lp{p};
  const u64 kp = k % p;
  if (kp != 1) {
    lp.route = LocalRoute::kSquareOne;
    lp.square = 1;
  } else if (p >= 5) {
    lp.route = LocalRoute::kSquareFour;
    lp.square = 4;
  } else {
    lp.route = LocalRoute::kYRoute;
    lp.square = 1;
    lp.t = 0;
    lp.y = 1;
  }
  if (lp.route != LocalRoute::kYRoute) {
    const u64 c = (lp.square % p + p - kp) % p;
    lp.t = rth_root_bijective(c, r, p);
    lp.y = lp.square == 4 ? 2 : 1;
  }
  if ((powmod(lp.t, r, p) + kp + p - lp.square % p) % p != 0 || lp.square % p == 0) {
    throw InvariantViolation("primitive_local_point: congruence check failed at p = " + std::to_string(p));
  }
  return lp;
}

struct FiberPrime {
  u64 n = 0;
  u64 q = 0;
};

// Least n in [n_start, N] with n = n0 (mod M0) and n^r + k prime. n >= 1.
inline std::optional<FiberPrime> find_fiber_prime(unsigned r, u64 k, i64 n0, u64 M0, u64 N, u64 n_start = 1,
                                                  std::optional<i64> coprime_to = std::nullopt) {
  if (M0 == 0) throw DomainError("find_fiber_prime: M0 must be positive");
  n_start = std::max<u64>(n_start, 1);
  u64 n = n_start + (reduce(n0, M0) + M0 - n_start % M0) % M0;
  for (; n <= N; n += M0) {
    const auto nr = checked_pow(n, r, kDomainMax);
    if (!nr || *nr > kDomainMax - k) throw RangeError("find_fiber_prime: n^r + k overflows at n = " + std::to_string(n));
    const u64 q = *nr + k;
    if (!is_prime(q)) continue;
    if (coprime_to && std::gcd(q, static_cast<u64>(std::abs(*coprime_to))) != 1) {
      throw InvariantViolation("find_fiber_prime: fiber prime " + std::to_string(q) + " shares a factor with a");
    }
    return FiberPrime{n, q};
  }
  return std::nullopt;
}

// Cornacchia: x^2 + d y^2 = p for prime p not dividing d.
inline std::optional<std::pair<u64, u64>> cornacchia(u64 d, u64 p) {
  if (p == 2) {
    if (d == 1) return std::pair<u64, u64>{1, 1};
    return std::nullopt;
  }
  const auto root = sqrt_mod((p - d % p) % p, p);
  if (!root) return std::nullopt;
  u64 x0 = *root;
  if (2 * x0 < p) x0 = p - x0;
  u64 a = p, b = x0;
  const u64 l = isqrt(p);
  while (b > l) {
    const u64 t = a % b;
    a = b;
    b = t;
  }
  const u64 rest = p - b * b;
  if (rest % d != 0 || !is_square(rest / d)) return std::nullopt;
  return std::pair<u64, u64>{b, isqrt(rest / d)};
}

// (y, z) >= 0 with y^2 - a z^2 = q for a < 0. Complete: Cornacchia for
// prime q coprime to a, exhaustive over z otherwise.
inline std::optional<std::pair<u64, u64>> represent_by_form(i64 a, u64 q) {
  if (a >= 0) throw PreconditionError("represent_by_form: requires a < 0");
  const u64 d = static_cast<u64>(-a);
  if (q > 1000 && q % d != 0 && is_prime(q)) return cornacchia(d, q);
  for (u64 z = 0; d * z * z <= q; ++z) {
    const u64 rest = q - d * z * z;
    if (is_square(rest)) return std::pair<u64, u64>{isqrt(rest), z};
  }
  return std::nullopt;
}

// y^2 - a z^2 = q for a > 0 with 0 <= z <= z_max; inconclusive on failure.
inline std::optional<std::pair<u64, u64>> represent_by_form_bounded(i64 a, i64 q, u64 z_max) {
  if (a <= 0) throw PreconditionError("represent_by_form_bounded: requires a > 0");
  for (u64 z = 0; z <= z_max; ++z) {
    const i128 y2 = static_cast<i128>(q) + static_cast<i128>(a) * z * z;
    if (y2 < 0) continue;
    if (y2 > static_cast<i128>(UINT64_MAX)) break;
    if (is_square(static_cast<u64>(y2))) return std::pair<u64, u64>{isqrt(static_cast<u64>(y2)), z};
  }
  return std::nullopt;
}

struct Congruence {
  i64 n0 = 0;
  u64 M0 = 1;
};

inline Congruence crt(const Congruence& x, u64 residue, u64 modulus) {
  const u64 r1 = reduce(x.n0, x.M0);
  const auto inv = invmod(x.M0 % modulus, modulus);
  if (!inv) throw DomainError("crt: moduli are not coprime");
  const u64 diff = (residue % modulus + modulus - r1 % modulus) % modulus;
  const u64 step = mulmod(diff, *inv, modulus);
  const u64 M = x.M0 * modulus;
  return {static_cast<i64>((r1 + static_cast<u64>(static_cast<u128>(x.M0) * step % M)) % M), M};
}

struct PointSearchBudget {
  u64 fiber_n = 20000;   // pipeline: n <= fiber_n
  u64 fallback_t = 100;  // fallback: |t| <= fallback_t
  u64 z_max = 100000;    // real fields: |z| <= z_max
};

struct PointSearchResult {
  std::optional<IntegralPoint> pipeline;
  std::optional<IntegralPoint> fallback;
  std::vector<LocalPoint> local_points;
  Congruence congruence;
  unsigned level = 1;
  u64 fiber_primes_tried = 0;
  u64 fiber_n_limit = 0;
  u64 fallback_t_limit = 0;

  // Neither search proves non-existence; a miss only means the budget ran out.
  std::string pipeline_status() const {
    if (pipeline) return "found";
    return "budget exhausted: n <= " + std::to_string(fiber_n_limit) + ", " + std::to_string(fiber_primes_tried) +
           " fiber primes not represented";
  }
  std::string fallback_status() const {
    if (fallback) return "found";
    return "budget exhausted: |t| <= " + std::to_string(fallback_t_limit);
  }

  bool found() const { return pipeline || fallback; }
  // Smaller |t| wins; ties go to the pipeline.
  std::optional<IntegralPoint> best() const {
    if (pipeline && fallback) return std::abs(fallback->t) < std::abs(pipeline->t) ? fallback : pipeline;
    return pipeline ? pipeline : fallback;
  }
};

namespace detail {

inline std::optional<std::pair<u64, u64>> represent(i64 a, i128 v, u64 z_max) {
  if (v == 0) return std::nullopt;
  if (a < 0) {
    if (v < 0) return std::nullopt;
    return represent_by_form(a, static_cast<u64>(v));
  }
  if (v > INT64_MAX || v < INT64_MIN) return std::nullopt;
  return represent_by_form_bounded(a, static_cast<i64>(v), z_max);
}

// n0 (mod prod p^level) from the local points, lifting t by Hensel's lemma
// where the root is simple and keeping level 1 otherwise.
inline Congruence glue_local_points(const std::vector<LocalPoint>& pts, unsigned r, u64 k, unsigned level) {
  Congruence c;
  for (const auto& lp : pts) {
    u64 residue = lp.t, modulus = lp.p;
    if (level > 1 && lp.route != LocalRoute::kYRoute) {
      std::vector<i64> f(r + 1, 0);
      f[0] = static_cast<i64>(k) - static_cast<i64>(lp.square);
      f[r] = 1;
      try {
        residue = hensel_lift(f, static_cast<i64>(lp.t), lp.p, level);
        modulus = *checked_pow(lp.p, level);
      } catch (const LiftFailure&) {
      }
    } else if (level > 1) {
      modulus = *checked_pow(lp.p, level);  // t = 0 is an exact point
    }
    c = crt(c, residue, modulus);
  }
  return c;
}

}  // namespace detail

inline PointSearchResult integral_point_search(const VarietyInstance& inst, const PointSearchBudget& budget = {}) {
  const VarietyInstance checked = make_variety(inst.a, inst.r, inst.k);
  if (!checked.admissible()) {
    throw PreconditionError("integral_point_search: a = " + std::to_string(inst.a) + ", r = " + std::to_string(inst.r) +
                            " is not admissible");
  }
  const i64 a = checked.a;
  const unsigned r = checked.r;
  const u64 k = checked.k;
  PointSearchResult res;
  for (u64 p : quad_field(a).ramified) res.local_points.push_back(primitive_local_point(a, r, k, p));

  // Largest n keeping n^r + k inside the 64-bit domain.
  const u64 n_cap = std::min(budget.fiber_n, iroot(kDomainMax - k, r));
  res.fiber_n_limit = n_cap;
  res.fallback_t_limit = budget.fallback_t;
  for (unsigned level = 1; level <= 2 && !res.pipeline; ++level) {
    res.level = level;
    res.congruence = detail::glue_local_points(res.local_points, r, k, level);
    u64 n_start = 1;
    while (auto fp = find_fiber_prime(r, k, res.congruence.n0, res.congruence.M0, n_cap, n_start, a)) {
      ++res.fiber_primes_tried;
      if (auto yz = detail::represent(a, fp->q, budget.z_max)) {
        IntegralPoint pt{static_cast<i64>(yz->first), static_cast<i64>(yz->second), static_cast<i64>(fp->n)};
        if (!verify_point(pt, a, r, k)) throw InvariantViolation("integral_point_search: pipeline point fails the equation");
        res.pipeline = pt;
        break;
      }
      n_start = fp->n + 1;
    }
  }

  for (u64 m = 0; m <= 2 * budget.fallback_t && !res.fallback; ++m) {
    const i64 t = (m % 2 == 1) ? static_cast<i64>((m + 1) / 2) : -static_cast<i64>(m / 2);
    const auto tr = signed_pow(t, r);
    if (!tr || *tr + static_cast<i128>(k) > static_cast<i128>(kDomainMax)) continue;
    if (auto yz = detail::represent(a, *tr + static_cast<i128>(k), budget.z_max)) {
      IntegralPoint pt{static_cast<i64>(yz->first), static_cast<i64>(yz->second), t};
      if (!verify_point(pt, a, r, k)) throw InvariantViolation("integral_point_search: fallback point fails the equation");
      res.fallback = pt;
    }
  }
  return res;
}

enum class ConicStatus { kFound, kLocallySolubleNotFound, kLocallyInsoluble };

inline const char* to_string(ConicStatus s) {
  switch (s) {
    case ConicStatus::kFound: return "found";
    case ConicStatus::kLocallySolubleNotFound: return "locally soluble, point not found";
    case ConicStatus::kLocallyInsoluble: return "locally insoluble";
  }
  return "?";
}

// y = Y/W, z = Z/W
struct RationalPoint {
  i64 Y = 0;
  i64 Z = 0;
  i64 W = 1;
};

struct ConicResult {
  ConicStatus status = ConicStatus::kLocallyInsoluble;
  std::optional<RationalPoint> point;
  std::optional<Place> obstruction;
};

// y^2 - a z^2 = q over Q: Hilbert-symbol local test, then a search over
// Y^2 - a Z^2 = q W^2 with 1 <= W <= height, 0 <= Z <= height.
inline ConicResult conic_rational_point(i64 a, i64 q, u64 height) {
  ConicResult res;
  if (q == 0) throw DomainError("conic_rational_point: q must be nonzero");
  if (auto bad = conic_local_obstruction(a, q)) {
    res.obstruction = bad;
    return res;
  }
  res.status = ConicStatus::kLocallySolubleNotFound;
  for (u64 W = 1; W <= height; ++W) {
    for (u64 Z = 0; Z <= height; ++Z) {
      const i128 y2 = static_cast<i128>(q) * W * W + static_cast<i128>(a) * Z * Z;
      if (y2 < 0 || y2 > static_cast<i128>(UINT64_MAX)) continue;
      if (is_square(static_cast<u64>(y2))) {
        res.status = ConicStatus::kFound;
        res.point = RationalPoint{static_cast<i64>(isqrt(static_cast<u64>(y2))), static_cast<i64>(Z), static_cast<i64>(W)};
        return res;
      }
    }
  }
  return res;
}

struct RationalSearchResult {
  std::optional<i64> t;
  ConicResult conic;
  u64 fibres_tried = 0;
};

// Rational point on X_{a,r,k} by scanning fibres t = 0, 1, -1, ... with
// |t| <= t_budget.
inline RationalSearchResult rational_point_search(const VarietyInstance& inst, u64 t_budget, u64 height) {
  RationalSearchResult res;
  for (u64 m = 0; m <= 2 * t_budget; ++m) {
    const i64 t = (m % 2 == 1) ? static_cast<i64>((m + 1) / 2) : -static_cast<i64>(m / 2);
    const auto tr = signed_pow(t, inst.r);
    if (!tr) continue;
    const i128 v = *tr + static_cast<i128>(inst.k);
    if (v == 0 || v > INT64_MAX || v < INT64_MIN) continue;
    ++res.fibres_tried;
    auto c = conic_rational_point(inst.a, static_cast<i64>(v), height);
    if (c.status == ConicStatus::kFound) {
      res.t = t;
      res.conic = c;
      return res;
    }
    if (c.status == ConicStatus::kLocallySolubleNotFound && res.conic.status == ConicStatus::kLocallyInsoluble) res.conic = c;
  }
  return res;
}

struct DensityRow {
  u64 k = 0;
  bool representable = false;
  i64 n1 = 0;
  i64 n2 = 0;
  i64 n3 = 0;
};

struct DensityReport {
  u64 d = 0;
  unsigned r = 0;
  u64 K = 0;
  double B = 2.0;
  i64 n3_min = 0;
  i64 n3_max = 0;
  std::vector<DensityRow> rows;
  std::vector<u64> exceptions;
  double fraction = 0.0;
};

// Which k <= K are n1^2 + d n2^2 + n3^r with
// n3 in [-ceil((B K)^(1/r)), floor(K^(1/r))].
inline DensityReport density_report(u64 d, unsigned r, u64 K, double B = 2.0, unsigned workers = 1) {
  if (d % 4 != 3 || !is_squarefree(d) || quad_field(-static_cast<i64>(d)).h > 2) {
    throw PreconditionError("density_report: d = " + std::to_string(d) + " is not in the class-number list");
  }
  if (r < 3 || !is_prime(r)) throw PreconditionError("density_report: r must be a prime >= 3");
  for (u64 p : prime_divisors(d)) {
    if (p % r == 1) throw PreconditionError("density_report: " + std::to_string(p) + " | d is 1 mod r");
  }
  if (B <= 0) throw DomainError("density_report: B must be positive");
  DensityReport rep;
  rep.d = d;
  rep.r = r;
  rep.K = K;
  rep.B = B;
  if (K == 0) return rep;

  const u64 neg_target = static_cast<u64>(std::ceil(B * static_cast<double>(K)));
  u64 neg = iroot(neg_target, r);
  if (*checked_pow(neg, r) < neg_target) ++neg;
  rep.n3_min = -static_cast<i64>(neg);
  rep.n3_max = static_cast<i64>(iroot(K, r));
  const u64 bound = K + *checked_pow(neg, r);

  // first[v] = smallest n2 with v - d n2^2 a square, or -1
  std::vector<std::int32_t> first(bound + 1, -1);
  for (u64 n2 = 0; d * n2 * n2 <= bound; ++n2) {
    for (u64 n1 = 0; n1 * n1 + d * n2 * n2 <= bound; ++n1) {
      auto& slot = first[n1 * n1 + d * n2 * n2];
      if (slot < 0) slot = static_cast<std::int32_t>(n2);
    }
  }

  rep.rows = parallel_map(static_cast<std::size_t>(K), workers, [&](std::size_t i) {
    DensityRow row{static_cast<u64>(i) + 1};
    for (u64 m = 0; !row.representable; ++m) {
      const i64 n3 = (m % 2 == 1) ? static_cast<i64>((m + 1) / 2) : -static_cast<i64>(m / 2);
      if (n3 > rep.n3_max && -n3 < rep.n3_min) break;
      if (n3 > rep.n3_max || n3 < rep.n3_min) continue;
      const i128 v = static_cast<i128>(row.k) - *signed_pow(n3, r);
      if (v < 0 || v > static_cast<i128>(bound) || first[static_cast<std::size_t>(v)] < 0) continue;
      const u64 n2 = static_cast<u64>(first[static_cast<std::size_t>(v)]);
      row = {row.k, true, static_cast<i64>(isqrt(static_cast<u64>(v) - d * n2 * n2)), static_cast<i64>(n2), n3};
    }
    return row;
  });
  u64 good = 0;
  for (const auto& row : rep.rows) {
    if (row.representable) {
      ++good;
    } else {
      rep.exceptions.push_back(row.k);
    }
  }
  rep.fraction = static_cast<double>(good) / static_cast<double>(K);
  return rep;
}

}  // namespace kummer
