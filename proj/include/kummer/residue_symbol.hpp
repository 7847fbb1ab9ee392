#pragma once

// r-th power residue symbols at prime ideals of Z[zeta_r] above split
// primes p = 1 (mod r). A prime ideal is named by the image eta of zeta_r
// in Z[zeta_r]/P = F_p, so the symbol is computed in F_p by Euler's
// criterion: m^((p-1)/r) = eta^j.

#include <algorithm>
#include <string>
#include <vector>

#include "kummer/arith.hpp"
#include "kummer/characters.hpp"

namespace kummer {

using SymbolValue = UnityValue;

// All primitive r-th roots of unity mod p in ascending order; empty unless
// p = 1 (mod r).
inline std::vector<u64> split_roots(u64 p, unsigned r) {
  detail::require_prime_order(r);
  if (!is_prime(p)) throw DomainError("split_roots: " + std::to_string(p) + " is not prime");
  std::vector<u64> roots;
  if (p % r != 1) return roots;
  const u64 h = powmod(primitive_root(p), (p - 1) / r, p);
  u64 v = 1;
  for (unsigned j = 1; j < r; ++j) {
    v = mulmod(v, h, p);
    roots.push_back(v);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

class SplitPrimeSymbol {
 public:
  SplitPrimeSymbol(u64 p, unsigned r, u64 eta) : p_(p), r_(r), eta_(eta % p) {
    detail::require_prime_order(r);
    if (!is_prime(p) || p % r != 1) {
      throw DomainError("SplitPrimeSymbol: " + std::to_string(p) + " does not split in Q(zeta_" + std::to_string(r) + ")");
    }
    if (powmod(eta_, r, p) != 1 || eta_ == 1) {
      throw DomainError("SplitPrimeSymbol: " + std::to_string(eta) + " is not a primitive r-th root of unity mod " + std::to_string(p));
    }
    u64 v = 1;
    powers_.resize(r);
    for (unsigned j = 0; j < r; ++j) {
      powers_[j] = v;
      v = mulmod(v, eta_, p);
    }
  }

  u64 p() const { return p_; }
  unsigned r() const { return r_; }
  u64 eta() const { return eta_; }

  // j with eta^j = x, for x an r-th root of unity mod p.
  unsigned index_of(u64 x) const {
    for (unsigned j = 0; j < r_; ++j) {
      if (powers_[j] == x) return j;
    }
    throw InvariantViolation("SplitPrimeSymbol: Euler criterion left mu_r");
  }

 private:
  u64 p_;
  unsigned r_;
  u64 eta_;
  std::vector<u64> powers_;
};

inline std::vector<SplitPrimeSymbol> split_prime_symbols(u64 p, unsigned r) {
  std::vector<SplitPrimeSymbol> out;
  for (u64 eta : split_roots(p, r)) out.emplace_back(p, r, eta);
  return out;
}

inline SymbolValue residue_symbol(i64 m, const SplitPrimeSymbol& s) {
  const u64 a = reduce(m, s.p());
  if (a == 0) return SymbolValue::zero(s.r());
  return SymbolValue::root(s.r(), s.index_of(powmod(a, (s.p() - 1) / s.r(), s.p())));
}

// The enumerated character mod p agreeing with m -> residue_symbol(m, s).
inline OrderRCharacter to_dirichlet(const SplitPrimeSymbol& s) {
  for (auto& chi : enumerate_order_r(s.p(), s.r())) {
    bool agree = true;
    for (u64 m = 1; m <= s.p() && agree; ++m) {
      agree = chi.eval(m) == residue_symbol(static_cast<i64>(m), s);
    }
    if (agree) return chi;
  }
  throw CorrespondenceViolation("to_dirichlet: no character mod " + std::to_string(s.p()) +
                                " matches eta = " + std::to_string(s.eta()));
}

// Product of symbols over distinct split primes (squarefree conductor).
inline SymbolValue product_symbol(i64 m, const std::vector<SplitPrimeSymbol>& moduli, unsigned r) {
  SymbolValue acc = SymbolValue::root(r, 0);
  for (std::size_t i = 0; i < moduli.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (moduli[i].p() == moduli[j].p()) throw DomainError("product_symbol: repeated prime " + std::to_string(moduli[i].p()));
    }
    acc = acc * residue_symbol(m, moduli[i]);
  }
  return acc;
}

}  // namespace kummer
