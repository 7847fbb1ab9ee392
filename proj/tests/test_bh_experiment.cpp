#include <gtest/gtest.h>

#include <cmath>

#include "kummer/bh_experiment.hpp"

using namespace kummer;

namespace {

ExperimentConfig small(u64 x, u64 y) {
  ExperimentConfig c;
  c.x = x;
  c.y = y;
  c.P = 1000;
  return c;
}

}  // namespace

TEST(LambdaSum, Examples) {
  auto c = small(3, 1);
  EXPECT_NEAR(lambda_sum(1, c), std::log(2.0) + std::log(3.0), 1e-12);
  c.M0 = 2;
  c.n0 = 1;
  EXPECT_NEAR(lambda_sum(1, c), std::log(2.0), 1e-12);
  // n^3 + 4 for n <= 2: 5 is prime, 12 is not
  EXPECT_NEAR(lambda_sum(4, small(2, 1)), std::log(5.0), 1e-12);
  // n^3 + 7 for n = 2, 5: 15 and 132 are not prime powers
  auto d = small(5, 1);
  d.M0 = 3;
  d.n0 = 2;
  EXPECT_EQ(lambda_sum(7, d), 0.0);
}

TEST(LambdaSum, BruteForce) {
  const auto c = small(60, 1);
  for (i64 k = 1; k < 50; ++k) {
    double s = 0;
    for (u64 n = 1; n <= 60; ++n) {
      const u64 v = n * n * n + static_cast<u64>(k);
      const auto f = factorize(v);
      if (f.size() == 1) s += std::log(static_cast<double>(f[0].first));
    }
    ASSERT_NEAR(lambda_sum(k, c), s, 1e-9) << k;
  }
}

TEST(Experiment, SingleRecord) {
  const auto c = small(3, 1);
  const auto res = run_experiment(c);
  ASSERT_EQ(res.records.size(), 1u);
  const double s = singular_series(1, c.series_params());
  EXPECT_NEAR(res.records[0].deviation, std::log(6.0) - 3.0 * s, 1e-12);
  EXPECT_FALSE(res.records[0].degenerate);
}

TEST(Experiment, DegenerateFlag) {
  auto c = small(20, 6);
  c.M0 = 2;
  c.n0 = 1;
  const auto res = run_experiment(c);
  for (const auto& rec : res.records) {
    // 1 + k is even exactly for odd k
    EXPECT_EQ(rec.degenerate, rec.k % 2 == 1);
    if (rec.degenerate) {
      EXPECT_EQ(rec.expected, 0.0);
    }
  }
  EXPECT_EQ(res.summary.degenerate, 3u);
  EXPECT_EQ(res.summary.admissible, 3u);
}

TEST(Experiment, OverflowRejected) {
  auto c = small(3000000, 10);
  EXPECT_THROW(run_experiment(c), RangeError);
}

TEST(Experiment, WorkerCountDoesNotChangeResults) {
  auto c = small(200, 300);
  c.workers = 1;
  const auto a = run_experiment(c);
  c.workers = 4;
  const auto b = run_experiment(c);
  ASSERT_EQ(a.records.size(), b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    ASSERT_EQ(a.records[i].lambda_sum, b.records[i].lambda_sum);
    ASSERT_EQ(a.records[i].deviation, b.records[i].deviation);
  }
  EXPECT_EQ(a.summary.m2, b.summary.m2);
}

TEST(Exceptional, Report) {
  std::vector<DeviationRecord> zero(5);
  for (auto& r : zero) r.deviation = 0.0;
  EXPECT_EQ(exceptional_report(zero, 100, 1.0, 1.0).count, 0u);

  std::vector<DeviationRecord> recs(4);
  recs[0].deviation = 0.5;
  recs[1].deviation = -2.0;
  recs[2].deviation = 0.1;
  recs[3].deviation = 9.0;
  recs[3].degenerate = true;
  EXPECT_EQ(count_exceptional(recs, 0.0), 3u);  // every admissible k, degenerate skipped
  EXPECT_EQ(count_exceptional(recs, 0.5), 1u);  // strict inequality
  const auto rep = exceptional_report(recs, 100, 1.0, 0.0);
  EXPECT_EQ(rep.admissible, 3u);
  EXPECT_NEAR(rep.cutoff, 100.0 / std::log(100.0), 1e-12);
}
