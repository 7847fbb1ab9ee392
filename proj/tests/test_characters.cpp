#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "kummer/characters.hpp"

using namespace kummer;

TEST(Enumerate, Counts) {
  EXPECT_EQ(enumerate_order_r(7, 3).size(), 2u);
  EXPECT_TRUE(enumerate_order_r(5, 3).empty());
  EXPECT_EQ(enumerate_order_r(91, 3).size(), 4u);
  EXPECT_EQ(enumerate_order_r(11 * 31 * 41, 5).size(), 64u);
  EXPECT_TRUE(enumerate_order_r(1, 3).empty());
  EXPECT_THROW(enumerate_order_r(49, 3), DomainError);
  EXPECT_THROW(enumerate_order_r(7, 4), DomainError);
}

TEST(Enumerate, ExactOrderAndDistinct) {
  for (unsigned r : {2U, 3U, 5U, 7U}) {
    for (u64 q : {29ULL, 43ULL, 71ULL, 211ULL, 7ULL * 13, 11ULL * 31}) {
      const auto chars = enumerate_order_r(q, r);
      for (std::size_t i = 0; i < chars.size(); ++i) {
        const auto& chi = chars[i];
        EXPECT_TRUE(chi.is_primitive());
        for (u64 n = 1; n <= q; ++n) {
          const auto v = chi.eval(n);
          ASSERT_EQ(v.is_zero(), std::gcd(n, q) != 1);
          if (!v.is_zero()) {
            ASSERT_EQ(v.pow(r).exponent(), 0u);
          }
        }
        // not principal, and chi^j is not principal for 0 < j < r since r is prime
        bool nontrivial = false;
        for (u64 n = 1; n <= q && !nontrivial; ++n) nontrivial = !chi.eval(n).is_zero() && chi.eval(n).exponent() != 0;
        EXPECT_TRUE(nontrivial);
        for (std::size_t j = 0; j < i; ++j) EXPECT_FALSE(pointwise_equal(chi, chars[j]));
      }
    }
  }
}

TEST(Eval, Examples) {
  const auto chars = enumerate_order_r(7, 3);
  // first character has w = 1 relative to g = 3
  EXPECT_EQ(chars[0].components()[0].w, 1u);
  EXPECT_EQ(chars[0](2).exponent(), 2u);
  EXPECT_TRUE(chars[0](14).is_zero());
  for (const auto& chi : chars) {
    EXPECT_EQ(chi(8).exponent(), 0u);
    EXPECT_EQ(chi(-6).exponent(), 0u);
  }
}

TEST(Eval, MultiplicativeAndPeriodic) {
  for (const auto& chi : enumerate_order_r(7 * 13 * 19, 3)) {
    for (i64 m = -50; m < 300; m += 7) {
      for (i64 n = 1; n < 200; n += 11) {
        ASSERT_EQ(chi(m * n), chi(m) * chi(n));
        ASSERT_EQ(chi(n + static_cast<i64>(chi.modulus())), chi(n));
      }
    }
  }
}

TEST(Eval, Orthogonality) {
  for (const auto& chi : enumerate_order_r(7 * 13, 3)) {
    std::complex<double> s{};
    for (u64 n = 1; n <= chi.modulus(); ++n) s += chi.eval(n).to_complex();
    EXPECT_LT(std::abs(s), 1e-9);
  }
}

TEST(Torsion, IncludesImprimitive) {
  // q = 14: characters induced from the two cubic characters mod 7
  const auto t = enumerate_r_torsion(14, 3);
  EXPECT_EQ(t.size(), 2u);
  for (const auto& chi : t) {
    EXPECT_EQ(chi.conductor(), 7u);
    EXPECT_FALSE(chi.is_primitive());
    EXPECT_TRUE(chi.eval(2).is_zero());
  }
  EXPECT_TRUE(enumerate_r_torsion(14, 3, true).empty());
  EXPECT_EQ(enumerate_r_torsion(91, 3).size(), 8u);  // 3^2 - 1
  EXPECT_EQ(enumerate_r_torsion(91, 3, true).size(), 4u);
  EXPECT_TRUE(enumerate_r_torsion(8, 3).empty());
}

TEST(Gauss, Principal) {
  for (u64 q = 1; q <= 200; ++q) {
    const auto t = gauss_sum_principal(q);
    ASSERT_NEAR(t.real(), mobius(q), 1e-9) << q;
    ASSERT_NEAR(t.imag(), 0.0, 1e-9) << q;
  }
}

TEST(Gauss, PrimitiveModulus) {
  for (const auto& chi : enumerate_order_r(7, 3)) EXPECT_NEAR(std::norm(gauss_sum(chi)), 7.0, 1e-9);
  for (u64 q : {31ULL, 91ULL, 11ULL * 31}) {
    for (unsigned r : {3U, 5U}) {
      for (const auto& chi : enumerate_order_r(q, r)) EXPECT_NEAR(std::norm(gauss_sum(chi)), static_cast<double>(q), 1e-7);
    }
  }
}

TEST(PolyaVinogradov, Examples) {
  const auto r3 = pv_max_ratio(3);
  EXPECT_EQ(r3.q, 3u);
  EXPECT_EQ(r3.r, 2u);
  EXPECT_NEAR(r3.max_partial_sum, 1.0, 1e-12);
  EXPECT_NEAR(r3.ratio, 1.0 / (std::sqrt(3.0) * std::log(3.0)), 1e-12);
  EXPECT_LE(pv_max_ratio(7, {3}).ratio, 1.2);
  EXPECT_EQ(pv_max_ratio(6, {3}).ratio, 0.0);
  EXPECT_EQ(pv_max_ratio(2).characters_checked, 0u);
}

TEST(PolyaVinogradov, IntervalOracle) {
  // brute force over all intervals inside [1, 2q]
  for (const auto& chi : enumerate_order_r(13, 3)) {
    double best = 0;
    for (u64 a = 1; a <= 26; ++a) {
      std::complex<double> s{};
      for (u64 b = a; b <= 26; ++b) {
        s += chi.eval(b).to_complex();
        best = std::max(best, std::abs(s));
      }
    }
    EXPECT_NEAR(max_interval_sum(chi), best, 1e-9);
  }
}
