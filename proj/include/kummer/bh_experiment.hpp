#pragma once

// Desk-scale average Bateman-Horn experiment for n^r + k: per-k sums of
// Lambda(n^r + k) over n <= x in a residue class, their deviation from
// S_{n0,M0}(k) x, the second moment and exceptional-set counts.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "kummer/arith.hpp"
#include "kummer/parallel.hpp"
#include "kummer/singular_series.hpp"

namespace kummer {

struct ExperimentConfig {
  unsigned r = 3;
  u64 x = 1000;
  u64 y = 10000;
  i64 n0 = 0;
  u64 M0 = 1;
  u64 P = 10000;
  double threshold = 1.0;  // exceptional cutoff exponent B': |dev| > x / (log x)^B'
  unsigned workers = 1;

  void validate() const {
    detail::require_prime_order(r);
    if (x < 2) throw DomainError("ExperimentConfig: x must be >= 2");
    if (y < 1) throw DomainError("ExperimentConfig: y must be >= 1");
    if (M0 < 1) throw DomainError("ExperimentConfig: M0 must be >= 1");
    if (P < 3) throw DomainError("ExperimentConfig: P must be >= 3");
    const auto top = checked_pow(x, r, kDomainMax);
    if (!top || *top > kDomainMax - y) {
      throw RangeError("ExperimentConfig: x^r + y exceeds the 64-bit domain");
    }
  }

  SingularSeriesParams series_params() const { return {r, n0, M0, P}; }
};

struct DeviationRecord {
  i64 k = 0;
  double lambda_sum = 0.0;
  double expected = 0.0;
  double deviation = 0.0;
  bool is_exceptional = false;
  bool degenerate = false;  // gcd(M0, n0^r + k) > 1, so S(k) = 0
};

struct ExperimentSummary {
  double m2 = 0.0;
  double m2_over_x2 = 0.0;
  u64 exceptional_count = 0;
  u64 admissible = 0;
  u64 degenerate = 0;
  double cutoff = 0.0;
};

struct ExperimentResult {
  std::vector<DeviationRecord> records;
  ExperimentSummary summary;
};

// Sum of Lambda(n^r + k) over 1 <= n <= x with n = n0 (mod M0).
inline double lambda_sum(i64 k, const ExperimentConfig& cfg) {
  const u64 start = reduce(cfg.n0, cfg.M0) == 0 ? cfg.M0 : reduce(cfg.n0, cfg.M0);
  CompensatedSum sum;
  for (u64 n = start; n <= cfg.x; n += cfg.M0) {
    const auto nr = checked_pow(n, cfg.r, kDomainMax);
    const i128 v = static_cast<i128>(nr ? *nr : kDomainMax) + k;
    if (!nr || v > static_cast<i128>(kDomainMax)) throw RangeError("lambda_sum: n^r + k overflows at n = " + std::to_string(n));
    if (v < 1) throw RangeError("lambda_sum: n^r + k < 1 at n = " + std::to_string(n));
    sum.add(von_mangoldt(static_cast<u64>(v)));
  }
  return sum.value();
}

inline double exceptional_cutoff(u64 x, double b_prime) {
  return static_cast<double>(x) / std::pow(std::log(static_cast<double>(x)), b_prime);
}

// Exceptional count at an explicit cutoff over non-degenerate records.
inline u64 count_exceptional(const std::vector<DeviationRecord>& records, double cutoff) {
  u64 c = 0;
  for (const auto& rec : records) {
    if (!rec.degenerate && std::abs(rec.deviation) > cutoff) ++c;
  }
  return c;
}

struct ExceptionalReport {
  double cutoff = 0.0;
  u64 count = 0;
  u64 admissible = 0;
  double fraction = 0.0;
  double scaled = 0.0;  // count (log x)^C / y
};

inline ExceptionalReport exceptional_report(const std::vector<DeviationRecord>& records, u64 x, double b_prime, double c) {
  ExceptionalReport rep;
  rep.cutoff = exceptional_cutoff(x, b_prime);
  rep.count = count_exceptional(records, rep.cutoff);
  for (const auto& rec : records) rep.admissible += rec.degenerate ? 0 : 1;
  if (rep.admissible > 0) {
    rep.fraction = static_cast<double>(rep.count) / static_cast<double>(rep.admissible);
    rep.scaled = rep.fraction * std::pow(std::log(static_cast<double>(x)), c);
  }
  return rep;
}

// One record per k in [1, y]. Records are produced in k order and reduced
// sequentially, so results are identical for any worker count.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const PrimeTable primes = sieve_primes(cfg.P);
  const SingularSeriesParams sp = cfg.series_params();
  const double x = static_cast<double>(cfg.x);
  const double cutoff = exceptional_cutoff(cfg.x, cfg.threshold);

  ExperimentResult res;
  res.records = parallel_map(static_cast<std::size_t>(cfg.y), cfg.workers, [&](std::size_t i) {
    DeviationRecord rec;
    rec.k = static_cast<i64>(i) + 1;
    rec.lambda_sum = lambda_sum(rec.k, cfg);
    rec.degenerate = singular_series_degenerate(rec.k, cfg.n0, cfg.M0, cfg.r);
    rec.expected = rec.degenerate ? 0.0 : singular_series(rec.k, sp, primes) * x;
    rec.deviation = rec.lambda_sum - rec.expected;
    rec.is_exceptional = !rec.degenerate && std::abs(rec.deviation) > cutoff;
    return rec;
  });

  CompensatedSum sq;
  auto& s = res.summary;
  s.cutoff = cutoff;
  for (const auto& rec : res.records) {
    if (rec.degenerate) {
      ++s.degenerate;
      continue;
    }
    ++s.admissible;
    sq.add(rec.deviation * rec.deviation);
    if (rec.is_exceptional) ++s.exceptional_count;
  }
  if (s.admissible > 0) s.m2 = sq.value() / static_cast<double>(s.admissible);
  s.m2_over_x2 = s.m2 / (x * x);
  return res;
}

}  // namespace kummer
