#pragma once

// Exact 64-bit integer primitives: modular arithmetic, deterministic
// primality, segmented prime sieve, factorization, von Mangoldt,
// primitive roots and discrete logarithms.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kummer/errors.hpp"

namespace kummer {

using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline constexpr u64 kDomainMax = u64{1} << 63;

inline u64 mulmod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m) {
  if (m == 1) return 0;
  u64 result = 1;
  base %= m;
  while (exp != 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

// Least nonnegative residue of a signed value.
inline u64 reduce(i64 n, u64 m) {
  const i128 r = static_cast<i128>(n) % static_cast<i128>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i128>(m) : r);
}

inline u64 reduce(i128 n, u64 m) {
  const i128 r = n % static_cast<i128>(m);
  return static_cast<u64>(r < 0 ? r + static_cast<i128>(m) : r);
}

// Modular inverse of a modulo m; nullopt if gcd(a, m) != 1.
inline std::optional<u64> invmod(u64 a, u64 m) {
  i128 old_r = static_cast<i128>(a % m), r = static_cast<i128>(m);
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  if (old_r != 1) {
    if (m == 1) return 0;
    return std::nullopt;
  }
  return reduce(old_s, m);
}

// base^exp, or nullopt if the result exceeds `limit`.
inline std::optional<u64> checked_pow(u64 base, unsigned exp, u64 limit = UINT64_MAX) {
  u128 acc = 1;
  for (unsigned i = 0; i < exp; ++i) {
    acc *= base;
    if (acc > limit) return std::nullopt;
    if (base <= 1) break;
  }
  if (base == 0 && exp > 0) return 0;
  return static_cast<u64>(acc);
}

// floor(n^(1/k)) computed exactly: a floating estimate corrected by +-1 steps.
inline u64 iroot(u64 n, unsigned k) {
  if (k == 0) throw DomainError("iroot: k must be positive");
  if (k == 1 || n < 2) return n;
  if (k >= 64) return 1;
  u64 x = static_cast<u64>(std::pow(static_cast<long double>(n), 1.0L / k));
  while (x > 0 && !checked_pow(x, k, n)) --x;
  while (checked_pow(x + 1, k, n)) ++x;
  return x;
}

inline u64 isqrt(u64 n) {
  u64 s = static_cast<u64>(std::sqrt(static_cast<double>(n)));
  while (s > 0 && static_cast<u128>(s) * s > n) --s;
  while (static_cast<u128>(s + 1) * (s + 1) <= n) ++s;
  return s;
}

inline bool is_square(u64 n) {
  const u64 s = isqrt(n);
  return s * s == n;
}

namespace detail {

inline bool miller_rabin_witness(u64 n, u64 d, int s, u64 a) {
  a %= n;
  if (a == 0) return false;
  u64 x = powmod(a, d, n);
  if (x == 1 || x == n - 1) return false;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return false;
  }
  return true;
}

inline constexpr unsigned kSmallPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};

}  // namespace detail

// Deterministic Miller-Rabin; the seven-base set is exact for all n < 2^64.
inline bool is_prime(u64 n) {
  if (n < 2) return false;
  for (unsigned p : detail::kSmallPrimes) {
    if (n == p) return true;
    if (n % p == 0) return false;
  }
  if (n < 53 * 53) return true;
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    if (detail::miller_rabin_witness(n, d, s, a)) return false;
  }
  return true;
}

struct SieveOptions {
  std::size_t segment_words = std::size_t{1} << 18;
  std::size_t memory_budget_bytes = std::size_t{1} << 30;
  bool with_smallest_factor = false;
};

class PrimeTable {
 public:
  PrimeTable() = default;
  PrimeTable(u64 limit, std::vector<u64> primes, std::vector<std::uint32_t> spf)
      : limit_(limit), primes_(std::move(primes)), spf_(std::move(spf)) {}

  u64 limit() const { return limit_; }
  const std::vector<u64>& primes() const& { return primes_; }
  std::vector<u64> primes() && { return std::move(primes_); }
  std::size_t count() const { return primes_.size(); }
  bool has_smallest_factor() const { return !spf_.empty(); }

  // Least prime factor of n, 2 <= n <= limit. Requires with_smallest_factor.
  u64 smallest_factor(u64 n) const {
    if (spf_.empty() || n < 2 || n > limit_) throw DomainError("smallest_factor: out of table");
    return spf_[n];
  }

  bool contains(u64 n) const {
    if (n > limit_) throw DomainError("PrimeTable::contains: beyond limit");
    return std::binary_search(primes_.begin(), primes_.end(), n);
  }

 private:
  u64 limit_ = 0;
  std::vector<u64> primes_;
  std::vector<std::uint32_t> spf_;
};

// Segmented sieve of Eratosthenes over odd numbers.
inline PrimeTable sieve_primes(u64 limit, const SieveOptions& opt = {}) {
  if (limit < 2) throw DomainError("sieve_primes: limit must be >= 2");
  const double est_count = 1.26 * static_cast<double>(limit) / std::log(static_cast<double>(limit)) + 16;
  double est_bytes = est_count * sizeof(u64) + static_cast<double>(opt.segment_words) * 8;
  if (opt.with_smallest_factor) est_bytes += static_cast<double>(limit + 1) * sizeof(std::uint32_t);
  if (est_bytes > static_cast<double>(opt.memory_budget_bytes) || limit >= kDomainMax) {
    throw ResourceError("sieve_primes: limit " + std::to_string(limit) + " exceeds memory budget");
  }

  const u64 root = isqrt(limit);
  std::vector<u64> base;
  {
    std::vector<bool> small(root + 1, true);
    for (u64 i = 2; i <= root; ++i) {
      if (!small[i]) continue;
      base.push_back(i);
      for (u64 j = i * i; j <= root; j += i) small[j] = false;
    }
  }

  std::vector<u64> primes;
  primes.reserve(static_cast<std::size_t>(est_count));
  primes.push_back(2);
  // Segment covers odd numbers lo, lo+2, ..., one flag byte per number.
  const u64 span = std::max<u64>(opt.segment_words * 8, 1024);
  std::vector<std::uint8_t> seg(span);
  for (u64 lo = 3; lo <= limit; lo += 2 * span) {
    const u64 hi = std::min(limit, lo + 2 * span - 1);
    const u64 n_odd = (hi - lo) / 2 + 1;
    std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(n_odd), 1);
    for (u64 p : base) {
      if (p == 2) continue;
      if (p * p > hi) break;
      u64 start = std::max(p * p, (lo + p - 1) / p * p);
      if ((start & 1) == 0) start += p;
      for (u64 j = start; j <= hi; j += 2 * p) seg[(j - lo) / 2] = 0;
    }
    for (u64 i = 0; i < n_odd; ++i) {
      if (seg[i]) primes.push_back(lo + 2 * i);
    }
  }

  std::vector<std::uint32_t> spf;
  if (opt.with_smallest_factor) {
    if (limit > UINT32_MAX) throw ResourceError("sieve_primes: smallest-factor table limited to 2^32");
    spf.assign(limit + 1, 0);
    for (u64 p : primes) {
      if (p * p > limit) break;
      for (u64 j = p * p; j <= limit; j += p) {
        if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(p);
      }
    }
    for (u64 i = 2; i <= limit; ++i) {
      if (spf[i] == 0) spf[i] = static_cast<std::uint32_t>(i);
    }
  }
  return PrimeTable(limit, std::move(primes), std::move(spf));
}

namespace detail {

inline u64 pollard_brent(u64 n) {
  if (n % 2 == 0) return 2;
  for (u64 c = 1;; ++c) {
    u64 y = 2, g = 1, q = 1, x = 0, ys = 0;
    const u64 m = 128;
    u64 r = 1;
    auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (u64 i = 0; i < r; ++i) y = f(y);
      u64 k = 0;
      do {
        ys = y;
        for (u64 i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

inline void factor_into(u64 n, std::vector<u64>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const u64 d = pollard_brent(n);
  factor_into(d, out);
  factor_into(n / d, out);
}

}  // namespace detail

// Prime factorization as ascending (prime, exponent) pairs; n >= 1.
inline std::vector<std::pair<u64, unsigned>> factorize(u64 n) {
  if (n == 0) throw DomainError("factorize: n must be positive");
  std::vector<u64> raw;
  for (u64 p = 2; p < 1000 && p * p <= n; ++p) {
    while (n % p == 0) {
      raw.push_back(p);
      n /= p;
    }
  }
  detail::factor_into(n, raw);
  std::sort(raw.begin(), raw.end());
  std::vector<std::pair<u64, unsigned>> out;
  for (u64 p : raw) {
    if (!out.empty() && out.back().first == p) {
      ++out.back().second;
    } else {
      out.emplace_back(p, 1);
    }
  }
  return out;
}

inline std::vector<u64> prime_divisors(u64 n) {
  std::vector<u64> ps;
  for (auto [p, e] : factorize(n)) ps.push_back(p);
  return ps;
}

inline bool is_squarefree(u64 n) {
  if (n == 0) return false;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return false;
  }
  return true;
}

inline int mobius(u64 n) {
  int mu = 1;
  for (auto [p, e] : factorize(n)) {
    if (e > 1) return 0;
    mu = -mu;
  }
  return mu;
}

inline u64 euler_phi(u64 n) {
  u64 phi = n;
  for (auto [p, e] : factorize(n)) phi = phi / p * (p - 1);
  return phi;
}

// log p if m = p^j (j >= 1), else 0. Prime-power detection is exact: small
// factors are stripped by trial division; otherwise m can only be p^j with
// p >= 53, so j <= 11 and integer roots of prime index suffice.
inline double von_mangoldt(u64 m) {
  if (m < 2) return 0.0;
  for (unsigned p : detail::kSmallPrimes) {
    if (m % p == 0) {
      while (m % p == 0) m /= p;
      return m == 1 ? std::log(static_cast<double>(p)) : 0.0;
    }
  }
  if (is_prime(m)) return std::log(static_cast<double>(m));
  for (unsigned ell : {2U, 3U, 5U, 7U, 11U}) {
    const u64 root = iroot(m, ell);
    if (root < 53) break;
    if (checked_pow(root, ell) == m) return von_mangoldt(root);
  }
  return 0.0;
}

// Smallest primitive root modulo the odd prime p.
inline u64 primitive_root(u64 p) {
  if (p < 3 || !is_prime(p)) throw DomainError("primitive_root: " + std::to_string(p) + " is not an odd prime");
  const auto ps = prime_divisors(p - 1);
  for (u64 g = 2; g < p; ++g) {
    bool ok = true;
    for (u64 q : ps) {
      if (powmod(g, (p - 1) / q, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  throw DomainError("primitive_root: none found");  // unreachable for prime p
}

// A square root of a modulo the odd prime p (Tonelli-Shanks), or nullopt
// if a is a non-residue.
inline std::optional<u64> sqrt_mod(u64 a, u64 p) {
  a %= p;
  if (a == 0) return 0;
  if (p == 2) return a;
  if (powmod(a, (p - 1) / 2, p) != 1) return std::nullopt;
  u64 q = p - 1;
  unsigned s = 0;
  while ((q & 1) == 0) {
    q >>= 1;
    ++s;
  }
  u64 z = 2;
  while (powmod(z, (p - 1) / 2, p) != p - 1) ++z;
  u64 m = s, c = powmod(z, q, p), t = powmod(a, q, p), x = powmod(a, (q + 1) / 2, p);
  while (t != 1) {
    u64 i = 0, t2 = t;
    while (t2 != 1) {
      t2 = mulmod(t2, t2, p);
      ++i;
    }
    u64 b = c;
    for (u64 j = 0; j + i + 1 < m; ++j) b = mulmod(b, b, p);
    m = i;
    c = mulmod(b, b, p);
    t = mulmod(t, c, p);
    x = mulmod(x, b, p);
  }
  return x;
}

// Index tables modulo an odd prime relative to its least primitive root.
// Below `table_threshold` the full log table is stored; above it discrete
// logs use baby-step/giant-step.
class ResidueSystem {
 public:
  static constexpr u64 kDefaultTableThreshold = u64{1} << 22;

  explicit ResidueSystem(u64 p, u64 table_threshold = kDefaultTableThreshold)
      : p_(p), g_(primitive_root(p)) {
    if (p_ <= table_threshold) {
      log_.assign(p_, 0);
      u64 v = 1;
      for (u64 e = 0; e + 1 < p_; ++e) {
        log_[v] = static_cast<std::uint32_t>(e);
        v = mulmod(v, g_, p_);
      }
    }
  }

  u64 p() const { return p_; }
  u64 g() const { return g_; }
  bool tabulated() const { return !log_.empty(); }

  // nu(n) in [0, p-2] with g^nu = n (mod p).
  u64 log(u64 n) const {
    n %= p_;
    if (n == 0) throw DomainError("discrete_log: p divides n");
    if (!log_.empty()) return log_[n];
    return bsgs(n);
  }

 private:
  u64 bsgs(u64 n) const {
    const u64 order = p_ - 1;
    const u64 m = isqrt(order) + 1;
    std::unordered_map<u64, u64> baby;
    baby.reserve(m);
    u64 v = 1;
    for (u64 j = 0; j < m; ++j) {
      baby.emplace(v, j);
      v = mulmod(v, g_, p_);
    }
    const u64 giant = powmod(*invmod(g_, p_), m, p_);
    u64 gamma = n;
    for (u64 i = 0; i <= m; ++i) {
      if (auto it = baby.find(gamma); it != baby.end()) return (i * m + it->second) % order;
      gamma = mulmod(gamma, giant, p_);
    }
    throw DomainError("discrete_log: no solution");  // unreachable for a primitive root
  }

  u64 p_;
  u64 g_;
  std::vector<std::uint32_t> log_;
};

inline u64 discrete_log(const ResidueSystem& rs, u64 n) { return rs.log(n); }

}  // namespace kummer
