#pragma once

// Dirichlet characters of prime order r on moduli built from primes
// p = 1 (mod r). Values are kept as exponents of zeta_r; complex numbers
// appear only when sums are formed.

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <string>
#include <vector>

#include "kummer/arith.hpp"

namespace kummer {

// zeta_r^exponent, or the distinguished zero value chi(n) = 0.
class UnityValue {
 public:
  static UnityValue zero(unsigned order) { return UnityValue(order, kZero); }
  static UnityValue root(unsigned order, unsigned exponent) {
    return UnityValue(order, static_cast<int>(exponent % order));
  }

  unsigned order() const { return order_; }
  bool is_zero() const { return exponent_ == kZero; }
  // Exponent in [0, order); meaningless for the zero value.
  unsigned exponent() const { return static_cast<unsigned>(exponent_); }

  UnityValue operator*(const UnityValue& o) const {
    if (is_zero() || o.is_zero()) return zero(order_);
    return root(order_, exponent() + o.exponent());
  }

  UnityValue pow(unsigned j) const {
    if (is_zero()) return *this;
    return root(order_, static_cast<unsigned>((u64{exponent()} * j) % order_));
  }

  std::complex<double> to_complex() const {
    if (is_zero()) return {0.0, 0.0};
    return std::polar(1.0, 2.0 * std::numbers::pi * exponent() / order_);
  }

  bool operator==(const UnityValue&) const = default;

 private:
  static constexpr int kZero = -1;
  UnityValue(unsigned order, int exponent) : order_(order), exponent_(exponent) {}
  unsigned order_;
  int exponent_;
};

// Shared, lazily built residue systems; each is immutable once constructed.
inline std::shared_ptr<const ResidueSystem> residue_system(u64 p) {
  static std::mutex mu;
  static std::map<u64, std::shared_ptr<const ResidueSystem>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[p];
  if (!slot) slot = std::make_shared<const ResidueSystem>(p);
  return slot;
}

struct CharacterComponent {
  std::shared_ptr<const ResidueSystem> residues;
  unsigned w = 0;  // exponent weight in Z/r; 0 means trivial at this prime
  u64 p() const { return residues->p(); }
};

// chi(n) = exp(2 pi i sum_p w_p nu_p(n) / r) for gcd(n, q) = 1, else 0.
// The modulus may carry extra prime factors with no component (induced
// characters); those only affect the gcd test.
class OrderRCharacter {
 public:
  OrderRCharacter(unsigned r, u64 modulus, std::vector<CharacterComponent> components)
      : r_(r), q_(modulus), components_(std::move(components)) {}

  unsigned r() const { return r_; }
  u64 modulus() const { return q_; }
  const std::vector<CharacterComponent>& components() const { return components_; }

  u64 conductor() const {
    u64 f = 1;
    for (const auto& c : components_) {
      if (c.w % r_ != 0) f *= c.p();
    }
    return f;
  }

  bool is_principal() const { return conductor() == 1; }
  bool is_primitive() const { return conductor() == q_; }

  UnityValue operator()(i64 n) const { return eval(reduce(n, q_)); }

  UnityValue eval(u64 n) const {
    n %= q_;
    if (std::gcd(n, q_) != 1) return UnityValue::zero(r_);
    u64 e = 0;
    for (const auto& c : components_) {
      if (c.w == 0) continue;
      e += (u64{c.w} * (c.residues->log(n % c.p()) % r_)) % r_;
    }
    return UnityValue::root(r_, static_cast<unsigned>(e % r_));
  }

  // Label as "q:p^w,p^w" for reports and test diagnostics.
  std::string label() const {
    std::string s = std::to_string(q_) + ":";
    for (std::size_t i = 0; i < components_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(components_[i].p()) + "^" + std::to_string(components_[i].w);
    }
    return s;
  }

 private:
  unsigned r_;
  u64 q_;
  std::vector<CharacterComponent> components_;
};

inline bool pointwise_equal(const OrderRCharacter& a, const OrderRCharacter& b) {
  if (a.modulus() != b.modulus() || a.r() != b.r()) return false;
  for (u64 n = 1; n <= a.modulus(); ++n) {
    if (!(a.eval(n) == b.eval(n))) return false;
  }
  return true;
}

namespace detail {

inline void require_prime_order(unsigned r) {
  if (r < 2 || !is_prime(r)) throw DomainError("character order " + std::to_string(r) + " is not prime");
}

// Odometer over weight vectors; lexicographic in (p, w_p).
template <typename Visit>
void for_each_weight(const std::vector<u64>& primes, unsigned lo, unsigned hi, Visit&& visit) {
  if (lo > hi) return;
  std::vector<unsigned> w(primes.size(), lo);
  for (;;) {
    visit(w);
    std::size_t i = w.size();
    while (i > 0) {
      --i;
      if (w[i] < hi) {
        ++w[i];
        for (std::size_t j = i + 1; j < w.size(); ++j) w[j] = lo;
        break;
      }
      if (i == 0) return;
    }
    if (w.empty()) return;
  }
}

inline OrderRCharacter make_character(unsigned r, u64 q, const std::vector<u64>& primes,
                                      const std::vector<unsigned>& w) {
  std::vector<CharacterComponent> comps;
  comps.reserve(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) comps.push_back({residue_system(primes[i]), w[i]});
  return OrderRCharacter(r, q, std::move(comps));
}

}  // namespace detail

// All primitive characters of exact order r and modulus q. Empty when some
// p | q has p != 1 (mod r), and for q = 1.
inline std::vector<OrderRCharacter> enumerate_order_r(u64 q, unsigned r) {
  detail::require_prime_order(r);
  if (!is_squarefree(q)) throw DomainError("enumerate_order_r: modulus " + std::to_string(q) + " is not squarefree");
  std::vector<OrderRCharacter> out;
  if (q == 1) return out;
  const auto primes = prime_divisors(q);
  for (u64 p : primes) {
    if (p % r != 1) return out;
  }
  detail::for_each_weight(primes, 1, r - 1, [&](const std::vector<unsigned>& w) {
    out.push_back(detail::make_character(r, q, primes, w));
  });
  return out;
}

// Every non-principal chi mod q with chi^r = chi_0 whose conductor is a
// product of primes p = 1 (mod r). With primitive_only, only those of
// conductor q.
inline std::vector<OrderRCharacter> enumerate_r_torsion(u64 q, unsigned r, bool primitive_only = false) {
  detail::require_prime_order(r);
  if (primitive_only) {
    if (!is_squarefree(q)) return {};
    return enumerate_order_r(q, r);
  }
  std::vector<u64> split;
  for (u64 p : prime_divisors(q)) {
    if (p % r == 1) split.push_back(p);
  }
  std::vector<OrderRCharacter> out;
  if (split.empty()) return out;
  detail::for_each_weight(split, 0, r - 1, [&](const std::vector<unsigned>& w) {
    bool trivial = true;
    for (unsigned v : w) trivial = trivial && v == 0;
    if (!trivial) out.push_back(detail::make_character(r, q, split, w));
  });
  return out;
}

// tau(chi) = sum_{n=1}^{q} chi(n) e(n/q).
inline std::complex<double> gauss_sum(const OrderRCharacter& chi) {
  const u64 q = chi.modulus();
  std::complex<double> s{0.0, 0.0};
  for (u64 n = 1; n <= q; ++n) {
    const UnityValue v = chi.eval(n);
    if (v.is_zero()) continue;
    s += v.to_complex() * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(n % q) / static_cast<double>(q));
  }
  return s;
}

// Gauss sum of the principal character mod q; equals mu(q).
inline std::complex<double> gauss_sum_principal(u64 q) {
  if (q == 1) return {1.0, 0.0};
  std::complex<double> s{0.0, 0.0};
  for (u64 n = 1; n <= q; ++n) {
    if (std::gcd(n, q) == 1) s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(q));
  }
  return s;
}

struct PolyaVinogradovResult {
  double ratio = 0.0;
  u64 q = 0;
  unsigned r = 0;
  double max_partial_sum = 0.0;
  std::size_t characters_checked = 0;
};

// Largest |sum_{M<n<=M+N} chi(n)| over intervals inside [1, 2q].
inline double max_interval_sum(const OrderRCharacter& chi) {
  const u64 q = chi.modulus();
  // Partial sums are q-periodic for non-principal chi, so intervals in
  // [1, 2q] realise every difference S_j - S_i with i, j in [0, q).
  std::vector<std::complex<double>> prefix(q);
  std::complex<double> s{0.0, 0.0};
  for (u64 n = 0; n < q; ++n) {
    prefix[n] = s;
    s += chi.eval(n + 1).to_complex();
  }
  double best = 0.0;
  for (u64 i = 0; i < q; ++i) {
    for (u64 j = i + 1; j < q; ++j) best = std::max(best, std::norm(prefix[j] - prefix[i]));
  }
  return std::sqrt(best);
}

// max |interval sum| / (sqrt(q) log q) over primitive characters of the
// given prime orders with modulus 3 <= q <= q_max.
inline PolyaVinogradovResult pv_max_ratio(u64 q_max, const std::vector<unsigned>& orders = {2, 3, 5, 7}) {
  PolyaVinogradovResult res;
  for (u64 q = 3; q <= q_max; ++q) {
    if (!is_squarefree(q)) continue;
    const double scale = std::sqrt(static_cast<double>(q)) * std::log(static_cast<double>(q));
    for (unsigned r : orders) {
      if (q % r == 0) continue;
      for (const auto& chi : enumerate_order_r(q, r)) {
        ++res.characters_checked;
        const double m = max_interval_sum(chi);
        if (m / scale > res.ratio) res = {m / scale, q, r, m, res.characters_checked};
      }
    }
  }
  return res;
}

}  // namespace kummer
