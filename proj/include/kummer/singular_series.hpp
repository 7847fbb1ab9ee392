#pragma once

// Root counts n_{k,p} of u^r + k mod p, the complete sums Sigma(q), the
// truncated singular series S_{n0,M0}(k) and truncated tails Psi(k).

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "kummer/arith.hpp"
#include "kummer/characters.hpp"
#include "kummer/parallel.hpp"

namespace kummer {

struct SingularSeriesParams {
  unsigned r = 3;
  i64 n0 = 0;
  u64 M0 = 1;
  u64 P = 10000;  // Euler product runs over primes p <= P

  void validate() const {
    detail::require_prime_order(r);
    if (M0 < 1) throw DomainError("SingularSeriesParams: M0 must be >= 1");
    if (P < 3) throw DomainError("SingularSeriesParams: truncation P must be >= 3");
  }
};

struct RootCount {
  i64 k;
  u64 p;
  unsigned r;
  unsigned count;
};

// Exhaustive count of u in [0, p) with u^r + k = 0 (mod p).
inline RootCount count_roots(i64 k, u64 p, unsigned r) {
  const u64 target = reduce(-static_cast<i128>(k), p);
  unsigned c = 0;
  for (u64 u = 0; u < p; ++u) {
    if (powmod(u, r, p) == target) ++c;
  }
  return {k, p, r, c};
}

// n_{k,p} without enumeration: 1 if p | k or r does not divide p - 1,
// otherwise r or 0 according to whether -k is an r-th power mod p.
inline unsigned root_count(i64 k, u64 p, unsigned r) {
  const u64 target = reduce(-static_cast<i128>(k), p);
  if (target == 0 || (p - 1) % r != 0) return 1;
  return powmod(target, (p - 1) / r, p) == 1 ? r : 0;
}

// 1 + sum over the exact-order-r characters mod p of chi(-k), p = 1 (mod r).
// Summed both in exponent arithmetic and in complex arithmetic; the two
// must agree with an integer.
inline long count_roots_via_characters(i64 k, u64 p, unsigned r) {
  if (p % r != 1) throw DomainError("count_roots_via_characters: requires p = 1 (mod r)");
  const auto chars = enumerate_order_r(p, r);
  std::vector<long> multiplicity(r, 0);
  std::complex<double> total{1.0, 0.0};
  bool zero = false;
  for (const auto& chi : chars) {
    const UnityValue v = chi(-k);
    if (v.is_zero()) {
      zero = true;
      continue;
    }
    ++multiplicity[v.exponent()];
    total += v.to_complex();
  }
  // Exact route: the sum of zeta^e over e is an integer only when the
  // exponent multiset is either all-zero or balanced.
  long exact;
  if (zero) {
    exact = 1;
  } else if (multiplicity[0] == static_cast<long>(chars.size())) {
    exact = 1 + static_cast<long>(chars.size());
  } else {
    for (unsigned e = 1; e < r; ++e) {
      if (multiplicity[e] != multiplicity[1]) {
        throw IdentityViolation("count_roots_via_characters: unbalanced character values at p=" + std::to_string(p));
      }
    }
    exact = 1 + multiplicity[0] - multiplicity[1];
  }
  const double rounded = std::round(total.real());
  if (std::abs(total.imag()) > 1e-6 || std::abs(total.real() - rounded) > 1e-6 || static_cast<long>(rounded) != exact) {
    throw IdentityViolation("count_roots_via_characters: complex sum " + std::to_string(total.real()) + "+" +
                            std::to_string(total.imag()) + "i disagrees with exponent route at p=" + std::to_string(p));
  }
  return exact;
}

// Value of (n0 + c M0)^r + k modulo m, with n0 and k possibly negative.
inline u64 fiber_value_mod(i64 n0, u64 c, u64 M0, unsigned r, i64 k, u64 m) {
  const u64 base = (reduce(n0, m) + mulmod(c % m, M0 % m, m)) % m;
  return (powmod(base, r, m) + reduce(k, m)) % m;
}

// Sigma(q) = sum_{c mod q/(q,M0)} c_q((n0 + c M0)^r + k) for squarefree q,
// using the Ramanujan sum c_p(m) = p - 1 if p | m else -1, multiplied over
// the primes of q.
inline i64 sigma_q(u64 q, i64 k, i64 n0, u64 M0, unsigned r) {
  if (!is_squarefree(q)) throw DomainError("sigma_q: " + std::to_string(q) + " is not squarefree");
  if (q == 1) return 1;
  const auto primes = prime_divisors(q);
  const u64 reps = q / std::gcd(q, M0);
  i64 total = 0;
  for (u64 c = 0; c < reps; ++c) {
    i64 term = 1;
    for (u64 p : primes) {
      term *= fiber_value_mod(n0, c, M0, r, k, p) == 0 ? static_cast<i64>(p) - 1 : -1;
    }
    total += term;
  }
  return total;
}

inline bool singular_series_degenerate(i64 k, i64 n0, u64 M0, unsigned r) {
  if (M0 == 1) return false;
  return std::gcd(fiber_value_mod(n0, 0, M0, r, k, M0), M0) != 1;
}

// S_{n0,M0}(k) truncated to primes p <= P, p not dividing 2 M0.
inline double singular_series(i64 k, const SingularSeriesParams& params, const PrimeTable& primes) {
  params.validate();
  if (singular_series_degenerate(k, params.n0, params.M0, params.r)) return 0.0;
  if (primes.limit() < params.P) throw DomainError("singular_series: prime table shorter than truncation bound");
  double prod = 1.0;
  for (u64 p : primes.primes()) {
    if (p > params.P) break;
    if (p == 2 || params.M0 % p == 0 || p % params.r != 1) continue;
    const double n = root_count(k, p, params.r);
    prod *= 1.0 - (n - 1.0) / static_cast<double>(p - 1);
  }
  return prod / static_cast<double>(euler_phi(params.M0));
}

inline double singular_series(i64 k, const SingularSeriesParams& params) {
  return singular_series(k, params, sieve_primes(std::max<u64>(params.P, 3)));
}

struct SingularSeriesRow {
  i64 k;
  double value;
  u64 P;
  double stability;  // |S(P) - S(2P)| / S(P), 0 when S(P) = 0
};

// Scan over k in [k_lo, k_hi] with the P-vs-2P truncation discrepancy.
inline std::vector<SingularSeriesRow> singular_series_scan(i64 k_lo, i64 k_hi, const SingularSeriesParams& params,
                                                           unsigned workers = 1) {
  params.validate();
  if (k_hi < k_lo) return {};
  const PrimeTable primes = sieve_primes(2 * params.P);
  SingularSeriesParams doubled = params;
  doubled.P = 2 * params.P;
  const auto n = static_cast<std::size_t>(k_hi - k_lo + 1);
  return parallel_map(n, workers, [&](std::size_t i) {
    const i64 k = k_lo + static_cast<i64>(i);
    const double s = singular_series(k, params, primes);
    const double s2 = singular_series(k, doubled, primes);
    return SingularSeriesRow{k, s, params.P, s > 0 ? std::abs(s - s2) / s : 0.0};
  });
}

// Squarefree q in (lo, hi] all of whose prime factors are = 1 (mod r),
// ascending, with their prime factors.
struct AdmissibleModulus {
  u64 q;
  std::vector<u64> primes;
};

inline std::vector<AdmissibleModulus> admissible_moduli(unsigned r, u64 lo, u64 hi, const PrimeTable& table) {
  std::vector<u64> split;
  for (u64 p : table.primes()) {
    if (p > hi) break;
    if (p % r == 1) split.push_back(p);
  }
  std::vector<AdmissibleModulus> out;
  std::vector<u64> stack;
  auto dfs = [&](auto&& self, std::size_t start, u64 q) -> void {
    if (q > lo) out.push_back({q, stack});
    for (std::size_t i = start; i < split.size(); ++i) {
      if (q > hi / split[i]) break;
      stack.push_back(split[i]);
      self(self, i + 1, q * split[i]);
      stack.pop_back();
    }
  };
  dfs(dfs, 0, 1);
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.q < b.q; });
  return out;
}

// Finite truncation of Psi(k): sum over admissible q in (Q1, Qmax] of
// mu(q)/phi(q) prod_{p|q} (n_{k,p} - 1).
inline double psi_tail(i64 k, unsigned r, u64 Q1, u64 Qmax, const std::vector<AdmissibleModulus>& moduli) {
  if (Q1 >= Qmax) throw DomainError("psi_tail: requires Q1 < Qmax");
  CompensatedSum sum;
  for (const auto& m : moduli) {
    if (m.q <= Q1 || m.q > Qmax) continue;
    double term = (m.primes.size() % 2 == 0) ? 1.0 : -1.0;
    for (u64 p : m.primes) term *= (static_cast<double>(root_count(k, p, r)) - 1.0) / static_cast<double>(p - 1);
    sum.add(term);
  }
  return sum.value();
}

inline double psi_tail(i64 k, unsigned r, u64 Q1, u64 Qmax) {
  detail::require_prime_order(r);
  if (Q1 >= Qmax) throw DomainError("psi_tail: requires Q1 < Qmax");
  const auto table = sieve_primes(std::max<u64>(Qmax, 2));
  return psi_tail(k, r, Q1, Qmax, admissible_moduli(r, Q1, Qmax, table));
}

// (1/y) sum_{k <= y} |Psi_trunc(k)|^2.
inline double psi_mean_square(u64 y, unsigned r, u64 Q1, u64 Qmax) {
  detail::require_prime_order(r);
  if (Q1 >= Qmax) throw DomainError("psi_mean_square: requires Q1 < Qmax");
  if (y == 0) return 0.0;
  const auto table = sieve_primes(std::max<u64>(Qmax, 2));
  const auto moduli = admissible_moduli(r, Q1, Qmax, table);
  CompensatedSum sum;
  for (u64 k = 1; k <= y; ++k) {
    const double v = psi_tail(static_cast<i64>(k), r, Q1, Qmax, moduli);
    sum.add(v * v);
  }
  return sum.value() / static_cast<double>(y);
}

}  // namespace kummer
