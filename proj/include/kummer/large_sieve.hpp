#pragma once

// Numerical laboratory for the large sieve over characters with
// chi^r = chi_0: the bilinear form, the four-regime bound Delta(Q, M),
// randomized and adversarial ratio sweeps, and a power-iteration check that
// a matrix and its adjoint share their operator norm.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "kummer/arith.hpp"
#include "kummer/characters.hpp"
#include "kummer/parallel.hpp"

namespace kummer {

using cplx = std::complex<double>;

enum class DeltaTerm { kQuadratic = 0, kThreeHalves = 1, kTwoThirds = 2, kFiveThirds = 3 };

inline const char* to_string(DeltaTerm t) {
  switch (t) {
    case DeltaTerm::kQuadratic: return "Q^2+M";
    case DeltaTerm::kThreeHalves: return "Q^3/2+Q^1/2M";
    case DeltaTerm::kTwoThirds: return "Q^2/3M+Q^4/3";
    case DeltaTerm::kFiveThirds: return "Q+M^5/3Q^-1/3+Q^1/3M^4/3";
  }
  return "?";
}

struct DeltaValue {
  double value;
  DeltaTerm active;
  std::array<double, 4> terms;
};

// (QM)^eps min{...}; ties go to the earliest listed term.
inline DeltaValue delta_bound(double Q, double M, double eps = 0.0) {
  if (Q < 1 || M < 1 || eps < 0) throw DomainError("delta_bound: requires Q, M >= 1 and eps >= 0");
  const std::array<double, 4> t{
      Q * Q + M,
      std::pow(Q, 1.5) + std::sqrt(Q) * M,
      std::pow(Q, 2.0 / 3.0) * M + std::pow(Q, 4.0 / 3.0),
      Q + std::pow(M, 5.0 / 3.0) * std::pow(Q, -1.0 / 3.0) + std::cbrt(Q) * std::pow(M, 4.0 / 3.0),
  };
  std::size_t best = 0;
  for (std::size_t i = 1; i < t.size(); ++i) {
    if (t[i] < t[best]) best = i;
  }
  return {std::pow(Q * M, eps) * t[best], static_cast<DeltaTerm>(best), t};
}

// Squarefree m in (M, 2M] coprime to r: the support of the coefficients.
inline std::vector<u64> sieve_support(unsigned r, u64 M) {
  std::vector<u64> out;
  for (u64 m = M + 1; m <= 2 * M; ++m) {
    if (m % r != 0 && is_squarefree(m)) out.push_back(m);
  }
  return out;
}

// Dense row-major matrix t_{chi, m} = chi(m).
struct CharacterMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<cplx> data;
  std::vector<std::string> row_labels;
  std::vector<u64> columns;

  cplx at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

// Rows: characters with chi^r = chi_0, chi != chi_0 for every modulus
// q in (Q, 2Q]; columns: the given m values.
inline CharacterMatrix character_matrix(unsigned r, u64 Q, const std::vector<u64>& columns, bool primitive_only = false) {
  CharacterMatrix T;
  T.cols = columns.size();
  T.columns = columns;
  for (u64 q = Q + 1; q <= 2 * Q; ++q) {
    for (const auto& chi : enumerate_r_torsion(q, r, primitive_only)) {
      T.row_labels.push_back(chi.label());
      for (u64 m : columns) T.data.push_back(chi.eval(m).to_complex());
      ++T.rows;
    }
  }
  return T;
}

// y = T a
inline std::vector<cplx> matvec(const CharacterMatrix& T, const std::vector<cplx>& a) {
  std::vector<cplx> y(T.rows);
  for (std::size_t i = 0; i < T.rows; ++i) {
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j < T.cols; ++j) s += T.data[i * T.cols + j] * a[j];
    y[i] = s;
  }
  return y;
}

// x = T^* b
inline std::vector<cplx> matvec_adjoint(const CharacterMatrix& T, const std::vector<cplx>& b) {
  std::vector<cplx> x(T.cols);
  for (std::size_t i = 0; i < T.rows; ++i) {
    const cplx bi = b[i];
    for (std::size_t j = 0; j < T.cols; ++j) x[j] += std::conj(T.data[i * T.cols + j]) * bi;
  }
  return x;
}

inline double norm_sq(const std::vector<cplx>& v) {
  CompensatedSum s;
  for (const auto& z : v) s.add(std::norm(z));
  return s.value();
}

struct LargeSieveInstance {
  unsigned r = 3;
  u64 Q = 1;
  u64 M = 1;
  std::vector<u64> support;   // m values
  std::vector<cplx> coeffs;   // a_m aligned with support
  u64 seed = 0;
};

struct SieveReport {
  u64 Q = 0;
  u64 M = 0;
  double lhs = 0.0;
  double norm_sq = 0.0;
  double delta = 0.0;
  double ratio = 0.0;
  DeltaTerm active = DeltaTerm::kQuadratic;
  std::size_t character_count = 0;
  std::string witness;  // which coefficient vector attained the ratio
};

inline double ls_lhs(const LargeSieveInstance& inst, bool primitive_only = false) {
  for (std::size_t i = 0; i < inst.support.size(); ++i) {
    if (inst.coeffs[i] != cplx{0.0, 0.0} && !is_squarefree(inst.support[i])) {
      throw DomainError("ls_lhs: coefficient on non-squarefree m = " + std::to_string(inst.support[i]));
    }
  }
  const auto T = character_matrix(inst.r, inst.Q, inst.support, primitive_only);
  return norm_sq(matvec(T, inst.coeffs));
}

namespace detail {

inline SieveReport make_report(u64 Q, u64 M, double lhs, double nsq, const DeltaValue& d, std::size_t chars, std::string witness) {
  SieveReport rep{Q, M, lhs, nsq, d.value, 0.0, d.active, chars, std::move(witness)};
  rep.ratio = (nsq > 0 && lhs > 0) ? lhs / (d.value * nsq) : 0.0;
  return rep;
}

}  // namespace detail

// Worst ratio lhs / (Delta ||a||^2) for one (Q, M) cell over `trials`
// random vectors (alternately Rademacher and uniform-phase) plus the
// all-ones vector and a_m = conj(chi*(m)) for a sampled chi*.
inline SieveReport ratio_cell(unsigned r, u64 Q, u64 M, unsigned trials, u64 seed, bool primitive_only = false) {
  const auto support = sieve_support(r, M);
  const auto T = character_matrix(r, Q, support, primitive_only);
  const DeltaValue d = delta_bound(static_cast<double>(Q), static_cast<double>(M), 0.0);
  std::seed_seq seq{seed, u64{r}, Q, M};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  SieveReport best = detail::make_report(Q, M, 0.0, 0.0, d, T.rows, "none");
  auto consider = [&](const std::vector<cplx>& a, const std::string& tag) {
    const double nsq = norm_sq(a);
    if (nsq == 0.0) return;
    auto rep = detail::make_report(Q, M, norm_sq(matvec(T, a)), nsq, d, T.rows, tag);
    if (rep.ratio > best.ratio || best.witness == "none") best = rep;
  };

  std::vector<cplx> a(support.size());
  for (unsigned t = 0; t < trials; ++t) {
    for (auto& v : a) v = (t % 2 == 0) ? cplx((rng() & 1) ? 1.0 : -1.0, 0.0) : std::polar(1.0, phase(rng));
    consider(a, (t % 2 == 0 ? "rademacher#" : "phase#") + std::to_string(t));
  }
  std::fill(a.begin(), a.end(), cplx{1.0, 0.0});
  consider(a, "ones");
  if (T.rows > 0) {
    const std::size_t row = static_cast<std::size_t>(rng() % T.rows);
    for (std::size_t j = 0; j < T.cols; ++j) a[j] = std::conj(T.at(row, j));
    consider(a, "aligned:" + T.row_labels[row]);
  }
  return best;
}

struct SweepCell {
  SieveReport report;
  u64 seed;
};

inline std::vector<SweepCell> ratio_sweep(unsigned r, const std::vector<u64>& Q_list, const std::vector<u64>& M_list,
                                          unsigned trials, u64 seed, bool primitive_only = false, unsigned workers = 1) {
  detail::require_prime_order(r);
  if (trials < 1) throw DomainError("ratio_sweep: trials must be >= 1");
  std::vector<std::pair<u64, u64>> grid;
  for (u64 Q : Q_list) {
    for (u64 M : M_list) grid.emplace_back(Q, M);
  }
  return parallel_map(grid.size(), workers, [&](std::size_t i) {
    return SweepCell{ratio_cell(r, grid[i].first, grid[i].second, trials, seed, primitive_only), seed};
  });
}

// Largest singular value of T by power iteration on T^*T (adjoint = false)
// or on TT^* (adjoint = true).
inline double top_singular_value(const CharacterMatrix& T, bool adjoint, double tol = 1e-8, int max_steps = 10000) {
  const std::size_t n = adjoint ? T.rows : T.cols;
  if (T.rows == 0 || T.cols == 0) return 0.0;
  std::mt19937_64 rng(0x5eed + n);
  std::normal_distribution<double> gauss;
  std::vector<cplx> v(n);
  for (auto& z : v) z = {gauss(rng), gauss(rng)};
  double lambda = 0.0;
  for (int step = 0; step < max_steps; ++step) {
    const double nv = std::sqrt(norm_sq(v));
    if (nv == 0.0) return 0.0;
    for (auto& z : v) z /= nv;
    std::vector<cplx> w = adjoint ? matvec(T, matvec_adjoint(T, v)) : matvec_adjoint(T, matvec(T, v));
    cplx rq{0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) rq += std::conj(v[i]) * w[i];
    const double next = rq.real();
    if (step > 0 && std::abs(next - lambda) <= tol * std::abs(next)) return std::sqrt(std::max(next, 0.0));
    lambda = next;
    v = std::move(w);
  }
  throw NumericalError("top_singular_value: power iteration did not converge");
}

// |sigma_max(T) - sigma_max(T^*)| / sigma_max(T) for the character matrix
// of (Q, M); 0 for an empty matrix.
inline double duality_gap(unsigned r, u64 Q, u64 M, bool primitive_only = false) {
  detail::require_prime_order(r);
  std::vector<u64> cols;
  for (u64 m = M + 1; m <= 2 * M; ++m) {
    if (is_squarefree(m)) cols.push_back(m);
  }
  const auto T = character_matrix(r, Q, cols, primitive_only);
  if (T.rows * T.cols > 2000ULL * 2000ULL) throw DomainError("duality_gap: matrix too large for dense evaluation");
  const double s1 = top_singular_value(T, false);
  const double s2 = top_singular_value(T, true);
  if (s1 == 0.0) return 0.0;
  return std::abs(s1 - s2) / s1;
}

}  // namespace kummer
