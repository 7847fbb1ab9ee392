// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kummer/kummer.hpp"

using namespace kummer;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Sigma(q) from its definition as a double sum of additive characters.
double sigma_definition(u64 q, i64 k, i64 n0, u64 M0, unsigned r) {
  const u64 reps = q / std::gcd(q, M0);
  std::complex<double> s{};
  for (u64 c = 0; c < reps; ++c) {
    const u64 f = fiber_value_mod(n0, c, M0, r, k, q);
    for (u64 a = 1; a <= q; ++a) {
      if (std::gcd(a, q) == 1) s += std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(a * f % q) / static_cast<double>(q));
    }
  }
  return s.real();
}

// Solubility of z^2 = a x^2 + b y^2 over Q_p by search modulo p^e.
int hilbert_by_search(i64 a, i64 b, u64 m) {
  std::vector<bool> square(m, false);
  for (u64 z = 0; z < m; ++z) square[z * z % m] = true;
  const u64 am = reduce(a, m), bm = reduce(b, m);
  for (u64 t = 0; t < m; ++t) {
    const u64 tt = t * t % m;
    if (square[(am + bm * tt) % m] || square[(am * tt + bm) % m]) return 1;
  }
  return -1;
}

Outcome c1_character_identity() {
  u64 checked = 0;
  for (unsigned r : {3U, 5U, 7U}) {
    for (u64 p : sieve_primes(500).primes()) {
      if (p % r != 1) continue;
      for (i64 k = 0; k < static_cast<i64>(p); ++k) {
        const long via = count_roots_via_characters(k, p, r);
        const auto direct = count_roots(k, p, r).count;
        if (via != static_cast<long>(direct)) {
          return {false, "mismatch r=" + std::to_string(r) + " p=" + std::to_string(p) + " k=" + std::to_string(k)};
        }
        ++checked;
      }
    }
  }
  return {true, std::to_string(checked) + " (r, p, k) triples"};
}

Outcome c2_correspondence() {
  u64 primes = 0;
  for (unsigned r : {3U, 5U, 7U}) {
    for (u64 p : sieve_primes(200).primes()) {
      if (p % r != 1) continue;
      const auto chars = enumerate_order_r(p, r);
      std::vector<bool> hit(chars.size(), false);
      const auto symbols = split_prime_symbols(p, r);
      if (symbols.size() != r - 1 || chars.size() != r - 1) return {false, "cardinality at p=" + std::to_string(p)};
      for (const auto& s : symbols) {
        const auto chi = to_dirichlet(s);
        for (u64 m = 1; m <= p; ++m) {
          if (!(chi.eval(m) == residue_symbol(static_cast<i64>(m), s))) return {false, "pointwise at p=" + std::to_string(p)};
        }
        for (std::size_t i = 0; i < chars.size(); ++i) {
          if (pointwise_equal(chars[i], chi)) {
            if (hit[i]) return {false, "two symbols map to one character at p=" + std::to_string(p)};
            hit[i] = true;
          }
        }
      }
      for (bool h : hit) {
        if (!h) return {false, "character not reached at p=" + std::to_string(p)};
      }
      ++primes;
    }
  }
  return {true, std::to_string(primes) + " (r, p) pairs"};
}

Outcome c3_sigma_laws() {
  std::mt19937_64 rng(20240901);
  u64 checks = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const i64 k = static_cast<i64>(rng() % 20001) - 10000;
    const u64 M0 = 1 + rng() % 30;
    const i64 n0 = static_cast<i64>(rng() % M0);
    const unsigned r = 3;
    std::vector<i64> sig(101, 0);
    for (u64 q = 1; q <= 100; ++q) {
      if (!is_squarefree(q)) continue;
      sig[q] = sigma_q(q, k, n0, M0, r);
      if (std::abs(static_cast<double>(sig[q]) - sigma_definition(q, k, n0, M0, r)) > 1e-6) {
        return {false, "definition q=" + std::to_string(q) + " k=" + std::to_string(k)};
      }
      if (is_prime(q) && M0 % q != 0 &&
          sig[q] != static_cast<i64>(q) * (static_cast<i64>(count_roots(k, q, r).count) - 1)) {
        return {false, "prime law q=" + std::to_string(q)};
      }
      ++checks;
    }
    for (u64 a = 2; a <= 100; ++a) {
      for (u64 b = 2; a * b <= 100; ++b) {
        if (std::gcd(a, b) != 1 || !is_squarefree(a * b)) continue;
        if (sig[a * b] != sig[a] * sig[b]) return {false, "multiplicativity " + std::to_string(a) + "*" + std::to_string(b)};
        ++checks;
      }
    }
  }
  return {true, std::to_string(checks) + " checks over 50 random (k, n0, M0)"};
}

Outcome c4_gauss_sums() {
  double worst = 0;
  u64 count = 0;
  for (u64 q = 1; q <= 500; ++q) {
    if (!is_squarefree(q)) continue;
    worst = std::max(worst, std::abs(gauss_sum_principal(q) - std::complex<double>(mobius(q), 0)));
    for (unsigned r : {2U, 3U, 5U, 7U}) {
      for (const auto& chi : enumerate_order_r(q, r)) {
        worst = std::max(worst, std::abs(std::norm(gauss_sum(chi)) - static_cast<double>(q)));
        ++count;
      }
    }
  }
  char buf[128];
  std::snprintf(buf, sizeof buf, "%llu primitive characters, max error %.2e", static_cast<unsigned long long>(count), worst);
  return {worst <= 1e-6, buf};
}

Outcome c5_bh_trend() {
  std::vector<double> m2;
  double fraction = 1.0;
  for (u64 x : {250ULL, 500ULL, 1000ULL}) {
    ExperimentConfig cfg;
    cfg.r = 3;
    cfg.x = x;
    cfg.y = 10000;
    cfg.M0 = 1;
    cfg.P = 10000;
    cfg.threshold = 1.0;
    cfg.workers = default_workers();
    const auto res = run_experiment(cfg);
    m2.push_back(res.summary.m2_over_x2);
    if (x == 1000) fraction = exceptional_report(res.records, x, 1.0, 0.0).fraction;
  }
  const bool decreasing = m2[0] > m2[1] && m2[1] > m2[2];
  char buf[200];
  std::snprintf(buf, sizeof buf, "M2/x^2 = %.6g, %.6g, %.6g; exceptional fraction at x/log x (x=1000) = %.4f", m2[0], m2[1],
                m2[2], fraction);
  return {decreasing && fraction < 0.5, buf};
}

Outcome c6_large_sieve() {
  const std::vector<u64> Qs{5, 10, 20, 40}, Ms{25, 50, 100, 200, 400};
  const auto cells = ratio_sweep(3, Qs, Ms, 100, 12345, false, default_workers());
  double C = 0, gap = 0;
  for (const auto& cell : cells) C = std::max(C, cell.report.ratio);
  for (u64 Q : Qs) {
    for (u64 M : Ms) gap = std::max(gap, duality_gap(3, Q, M));
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "C = %.4f over %zu cells, max duality gap %.2e", C, cells.size(), gap);
  return {C <= 10.0 && gap <= 1e-6, buf};
}

Outcome c7_hilbert() {
  std::mt19937_64 rng(777);
  for (int i = 0; i < 200; ++i) {
    i64 a = 0, b = 0;
    while (a == 0) a = static_cast<i64>(rng() % 2000001) - 1000000;
    while (b == 0) b = static_cast<i64>(rng() % 2000001) - 1000000;
    if (hilbert_product(a, b) != 1) return {false, "reciprocity fails for (" + std::to_string(a) + ", " + std::to_string(b) + ")"};
  }
  // Local formula against search modulo p^e for every prime power p^e <= 10^4
  // that decides solubility: a, b with v_p in {0, 1} and e = 1 + 2 v_p(4ab).
  u64 checked = 0;
  for (u64 p : sieve_primes(10000).primes()) {
    std::vector<i64> vals;
    // above 100 only units are possible (p^3 > 10^4), so a few pairs suffice
    const std::vector<i64> units = p < 100 ? std::vector<i64>{1, -1, 2, -2, 3, -3, 5, -5, 6, -6, 7, -7, 11, -11, 13, -13}
                                           : std::vector<i64>{-1, 2, -3};
    for (i64 u : units) {
      if (u % static_cast<i64>(p) != 0) {
        vals.push_back(u);
        vals.push_back(u * static_cast<i64>(p));
      }
    }
    for (i64 a : vals) {
      for (i64 b : vals) {
        unsigned v = 0;
        i64 t = 4 * a * b;
        while (t % static_cast<i64>(p) == 0) {
          t /= static_cast<i64>(p);
          ++v;
        }
        const auto m = checked_pow(p, 1 + 2 * v, 10000);
        if (!m) continue;
        if (hilbert_symbol(a, b, Place::prime(p)) != hilbert_by_search(a, b, *m)) {
          return {false, "local formula (" + std::to_string(a) + ", " + std::to_string(b) + ")_" + std::to_string(p)};
        }
        ++checked;
      }
    }
  }
  return {true, "200 reciprocity pairs; " + std::to_string(checked) + " local symbols against search mod p^e"};
}

Outcome c8_class_list() {
  const std::string expected = "3,7,11,15,19,35,43,51,67,91,115,123,163,187,235,267,403,427";
  std::string got;
  for (u64 d : class_list(427)) got += (got.empty() ? "" : ",") + std::to_string(d);
  return {got == expected, got};
}

Outcome c9_density() {
  const auto rep = density_report(3, 5, 10000, 2.0, default_workers());
  for (const auto& row : rep.rows) {
    if (!row.representable) continue;
    const i128 v = static_cast<i128>(row.n1) * row.n1 + 3 * static_cast<i128>(row.n2) * row.n2 +
                   *signed_pow(row.n3, 5);
    if (v != static_cast<i128>(row.k)) return {false, "bad triple for k=" + std::to_string(row.k)};
  }
  std::string ex;
  for (std::size_t i = 0; i < rep.exceptions.size(); ++i) {
    if (i == 12) {
      ex += ",...";
      break;
    }
    ex += (i ? "," : "") + std::to_string(rep.exceptions[i]);
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "fraction %.4f, %zu exceptions: ", rep.fraction, rep.exceptions.size());
  return {rep.fraction >= 0.95, buf + ex};
}

Outcome c10_pipeline() {
  std::mt19937_64 rng(31337);
  const std::vector<std::pair<i64, unsigned>> combos{{-3, 3}, {-3, 5}, {-7, 5}, {-11, 3}, {-15, 3}, {-15, 5}};
  u64 both = 0, pipeline_only = 0, fallback_only = 0, neither = 0;
  for (int i = 0; i < 100; ++i) {
    const auto [a, r] = combos[rng() % combos.size()];
    const u64 k = 1 + rng() % 1000;
    const auto inst = make_variety(a, r, k);
    if (!inst.admissible()) return {false, "generated an inadmissible instance"};
    const auto res = integral_point_search(inst);
    for (const auto& p : {res.pipeline, res.fallback}) {
      if (p && !verify_point(*p, a, r, k)) return {false, "point fails the equation for k=" + std::to_string(k)};
    }
    const bool budget_ok = (res.pipeline || res.pipeline_status().rfind("budget exhausted", 0) == 0) &&
                           (res.fallback || res.fallback_status().rfind("budget exhausted", 0) == 0);
    if (!budget_ok) return {false, "unexplained failure for a=" + std::to_string(a) + " k=" + std::to_string(k)};
    if (res.pipeline && res.fallback) ++both;
    else if (res.pipeline) ++pipeline_only;
    else if (res.fallback) ++fallback_only;
    else ++neither;
  }
  return {true, "both " + std::to_string(both) + ", pipeline only " + std::to_string(pipeline_only) + ", fallback only " +
                    std::to_string(fallback_only) + ", budget-exhausted " + std::to_string(neither)};
}

Outcome c11_polya_vinogradov() {
  const auto res = pv_max_ratio(1000);
  char buf[160];
  std::snprintf(buf, sizeof buf, "max ratio %.4f at q=%llu, r=%u over %zu characters", res.ratio,
                static_cast<unsigned long long>(res.q), res.r, res.characters_checked);
  return {res.ratio <= 1.2, buf};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"character identity for root counts", c1_character_identity},
      {"residue symbol / character correspondence", c2_correspondence},
      {"Sigma(q) prime law and multiplicativity", c3_sigma_laws},
      {"Gauss sums", c4_gauss_sums},
      {"average Bateman-Horn trend", c5_bh_trend},
      {"large sieve constant and duality", c6_large_sieve},
      {"Hilbert reciprocity and local formula", c7_hilbert},
      {"class list to 427", c8_class_list},
      {"representation density d=3, r=5", c9_density},
      {"integral point pipeline soundness", c10_pipeline},
      {"Polya-Vinogradov spot check", c11_polya_vinogradov},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %2zu %s: %s (%s) [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
