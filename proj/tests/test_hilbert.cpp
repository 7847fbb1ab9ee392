#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "kummer/hilbert.hpp"

using namespace kummer;

namespace {

// Strip even powers of p so that v_p(a) is 0 or 1; (a, b)_p only depends on
// the class of a modulo squares.
i64 strip_squares(i64 a, u64 p) {
  const i64 pp = static_cast<i64>(p * p);
  while (a % pp == 0) a /= pp;
  return a;
}

unsigned vp(i64 a, u64 p) {
  unsigned v = 0;
  while (a % static_cast<i64>(p) == 0) {
    a /= static_cast<i64>(p);
    ++v;
  }
  return v;
}

// z^2 = a x^2 + b y^2 has a primitive solution mod p^e; one of x, y is a
// unit, so scale it to 1. With e = 1 + 2 v_p(4ab) Hensel's lemma lifts any
// such solution, so this decides solubility over Q_p.
int oracle(i64 a, i64 b, u64 p) {
  a = strip_squares(a, p);
  b = strip_squares(b, p);
  const unsigned e = 1 + 2 * vp(4 * a * b, p);
  u64 m = 1;
  for (unsigned i = 0; i < e; ++i) m *= p;
  std::vector<bool> square(m, false);
  for (u64 z = 0; z < m; ++z) square[z * z % m] = true;
  const u64 am = reduce(a, m), bm = reduce(b, m);
  for (u64 t = 0; t < m; ++t) {
    const u64 tt = t * t % m;
    if (square[(am + bm * tt) % m] || square[(am * tt + bm) % m]) return 1;
  }
  return -1;
}

u64 oracle_modulus(i64 a, i64 b, u64 p) {
  a = strip_squares(a, p);
  b = strip_squares(b, p);
  const unsigned e = 1 + 2 * vp(4 * a * b, p);
  u64 m = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (m > 100000) return m;
    m *= p;
  }
  return m;
}

}  // namespace

TEST(Hilbert, Examples) {
  for (i64 b : {-7, -1, 2, 3, 15}) {
    EXPECT_EQ(hilbert_symbol(1, b, Place::prime(2)), 1);
    EXPECT_EQ(hilbert_symbol(1, b, Place::prime(3)), 1);
    EXPECT_EQ(hilbert_symbol(1, b, Place::infinity()), 1);
  }
  EXPECT_EQ(hilbert_symbol(-1, -1, Place::prime(2)), -1);
  EXPECT_EQ(hilbert_symbol(-1, -1, Place::infinity()), -1);
  EXPECT_EQ(hilbert_symbol(-1, -1, Place::prime(3)), 1);
  EXPECT_THROW(hilbert_symbol(0, 1, Place::prime(3)), DomainError);
  EXPECT_THROW(hilbert_symbol(2, 1, Place::prime(9)), DomainError);
}

TEST(Hilbert, Rational) {
  EXPECT_EQ(hilbert_symbol(Rational{-1, 4}, Rational{-1, 9}, Place::prime(2)), -1);
  EXPECT_EQ(hilbert_symbol(Rational{3, 5}, Rational{7, 1}, Place::prime(5)),
            hilbert_symbol(15, 7, Place::prime(5)));
}

TEST(Hilbert, MatchesExhaustiveOracle) {
  std::vector<i64> values;
  for (i64 v = -40; v <= 40; ++v) {
    if (v != 0) values.push_back(v);
  }
  int checked = 0;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 97ULL}) {
    for (i64 a : values) {
      for (i64 b : values) {
        if (oracle_modulus(a, b, p) > 10000) continue;
        ASSERT_EQ(hilbert_symbol(a, b, Place::prime(p)), oracle(a, b, p)) << "(" << a << "," << b << ")_" << p;
        ++checked;
      }
    }
  }
  EXPECT_GT(checked, 20000);
}

TEST(Hilbert, Reciprocity) {
  std::mt19937_64 rng(99);
  for (int i = 0; i < 500; ++i) {
    i64 a = static_cast<i64>(rng() % 2000001) - 1000000;
    i64 b = static_cast<i64>(rng() % 2000001) - 1000000;
    if (a == 0 || b == 0) continue;
    ASSERT_EQ(hilbert_product(a, b), 1) << a << "," << b;
  }
}

TEST(Hilbert, Bimultiplicative) {
  for (i64 a : {-6, -1, 2, 5, 10, 21}) {
    for (i64 b : {-3, 3, 7, 12}) {
      for (i64 c : {-5, 2, 11}) {
        for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL}) {
          const Place v = Place::prime(p);
          ASSERT_EQ(hilbert_symbol(a, b * c, v), hilbert_symbol(a, b, v) * hilbert_symbol(a, c, v));
          ASSERT_EQ(hilbert_symbol(a, b, v), hilbert_symbol(b, a, v));
        }
      }
    }
  }
}

TEST(Conic, LocalObstruction) {
  // y^2 + 3 z^2 = 5 is insoluble at 3 and 5
  const auto bad = conic_local_obstruction(-3, 5);
  ASSERT_TRUE(bad.has_value());
  EXPECT_FALSE(conic_local_obstruction(-3, 7).has_value());
  EXPECT_FALSE(conic_local_obstruction(2, 7).has_value());
  // y^2 + z^2 = -1 fails at infinity
  const auto inf = conic_local_obstruction(-1, -1);
  ASSERT_TRUE(inf.has_value());
  EXPECT_TRUE(inf->is_infinite());
}
