// kummer: command-line front end.
//
//   kummer <subcommand> [--flag value ...] [--config file.json] [--out file.csv]
//
// With --out, the CSV goes to the file and a manifest to FILE.manifest.json;
// otherwise the CSV goes to stdout and the JSON summary to stderr.
// Exit codes: 0 ok, 1 usage, 2 runtime failure, 3 invariant violation.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "kummer/io.hpp"
#include "kummer/kummer.hpp"

using namespace kummer;

namespace {

struct Output {
  CsvTable table;
  json summary = json::object();
};

std::string yes_no(bool b) { return b ? "1" : "0"; }

Output run_bh(const RunConfig& c) {
  ExperimentConfig cfg;
  cfg.r = static_cast<unsigned>(c.get_uint("r"));
  cfg.x = c.get_uint("x");
  cfg.y = c.get_uint("y");
  cfg.n0 = c.get_int("n0");
  cfg.M0 = c.get_uint("m0");
  cfg.P = c.get_uint("trunc-p");
  cfg.threshold = c.get_double("threshold");
  cfg.workers = c.workers;
  try {
    cfg.validate();
  } catch (const RangeError& e) {
    throw UsageError(std::string("--x/--y: ") + e.what());
  }
  const auto res = run_experiment(cfg);
  Output out;
  out.table.header = {"k", "lambda_sum", "expected", "deviation", "exceptional"};
  for (const auto& rec : res.records) {
    out.table.rows.push_back({std::to_string(rec.k), format_double(rec.lambda_sum), format_double(rec.expected),
                              format_double(rec.deviation), yes_no(rec.is_exceptional)});
  }
  const auto& s = res.summary;
  out.summary = {{"m2", s.m2},           {"m2_over_x2", s.m2_over_x2}, {"exceptional_count", s.exceptional_count},
                 {"admissible", s.admissible}, {"degenerate", s.degenerate}, {"cutoff", s.cutoff}};
  return out;
}

Output run_series(const RunConfig& c) {
  SingularSeriesParams p{static_cast<unsigned>(c.get_uint("r")), c.get_int("n0"), c.get_uint("m0"), c.get_uint("trunc-p")};
  const auto rows = singular_series_scan(static_cast<i64>(c.get_uint("k-lo")), static_cast<i64>(c.get_uint("k-hi")), p,
                                         c.workers);
  Output out;
  out.table.header = {"k", "S_trunc", "P", "stability_metric"};
  double worst = 0;
  for (const auto& r : rows) {
    out.table.rows.push_back({std::to_string(r.k), format_double(r.value), std::to_string(r.P), format_double(r.stability)});
    worst = std::max(worst, r.stability);
  }
  out.summary = {{"rows", rows.size()}, {"max_stability_metric", worst}};
  return out;
}

Output run_sieve(const RunConfig& c) {
  const unsigned r = static_cast<unsigned>(c.get_uint("r"));
  const auto cells = ratio_sweep(r, c.get_list("q-list"), c.get_list("m-list"), static_cast<unsigned>(c.get_uint("trials")),
                                 c.seed, c.get_bool("primitive-only"), c.workers);
  Output out;
  out.table.header = {"r", "Q", "M", "lhs_max", "delta", "ratio", "active_term", "seed"};
  double C = 0;
  for (const auto& cell : cells) {
    const auto& rep = cell.report;
    out.table.rows.push_back({std::to_string(r), std::to_string(rep.Q), std::to_string(rep.M), format_double(rep.lhs),
                              format_double(rep.delta), format_double(rep.ratio), to_string(rep.active),
                              std::to_string(cell.seed)});
    C = std::max(C, rep.ratio);
  }
  out.summary = {{"C", C}, {"cells", cells.size()}};
  return out;
}

Output run_class_list(const RunConfig& c) {
  const auto list = class_list(c.get_uint("bound"));
  Output out;
  out.table.header = {"d", "h"};
  for (u64 d : list) out.table.rows.push_back({std::to_string(d), std::to_string(quad_field(-static_cast<i64>(d)).h)});
  out.summary = {{"count", list.size()}, {"list", list}};
  return out;
}

Output run_variety(const RunConfig& c) {
  const i64 a = c.get_int("a");
  const unsigned r = static_cast<unsigned>(c.get_uint("r"));
  const u64 k = c.get_uint("k");
  VarietyInstance inst;
  try {
    inst = make_variety(a, r, k);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  if (!inst.admissible()) throw UsageError("--a: (a, r) = (" + std::to_string(a) + ", " + std::to_string(r) + ") is not admissible");
  PointSearchBudget budget;
  budget.fiber_n = c.get_uint("budget");
  budget.fallback_t = c.get_uint("fallback-t");
  const auto res = integral_point_search(inst, budget);
  Output out;
  out.table.header = {"route", "y", "z", "t"};
  auto add = [&](const char* route, const std::optional<IntegralPoint>& p) {
    if (p) out.table.rows.push_back({route, std::to_string(p->y), std::to_string(p->z), std::to_string(p->t)});
  };
  add("pipeline", res.pipeline);
  add("fallback", res.fallback);
  json locals = json::array();
  for (const auto& lp : res.local_points) {
    locals.push_back({{"p", lp.p}, {"route", to_string(lp.route)}, {"square", lp.square}, {"t", lp.t}});
  }
  out.summary = {{"found", res.found()},
                 {"pipeline", res.pipeline_status()},
                 {"fallback", res.fallback_status()},
                 {"congruence", {{"n0", res.congruence.n0}, {"M0", res.congruence.M0}}},
                 {"level", res.level},
                 {"local_points", locals}};
  if (auto best = res.best()) out.summary["point"] = {best->y, best->z, best->t};
  return out;
}

Output run_density(const RunConfig& c) {
  const auto rep = density_report(c.get_uint("d"), static_cast<unsigned>(c.get_uint("r")), c.get_uint("K"),
                                  c.get_double("b"), c.workers);
  Output out;
  out.table.header = {"k", "representable", "n1", "n2", "n3"};
  for (const auto& row : rep.rows) {
    out.table.rows.push_back({std::to_string(row.k), yes_no(row.representable), std::to_string(row.n1),
                              std::to_string(row.n2), std::to_string(row.n3)});
  }
  out.summary = {{"fraction", rep.fraction}, {"exceptions", rep.exceptions}, {"n3_min", rep.n3_min}, {"n3_max", rep.n3_max}};
  return out;
}

// Quick consistency checks across modules; any failure is an invariant
// violation (exit 3).
Output run_selftest(const RunConfig&) {
  Output out;
  out.table.header = {"check", "result"};
  auto check = [&](const std::string& name, bool ok) {
    out.table.rows.push_back({name, ok ? "pass" : "FAIL"});
    if (!ok) throw InvariantViolation("selftest: " + name);
  };
  check("pi(10^5) = 9592", sieve_primes(100000).count() == 9592);
  bool roots = true;
  for (unsigned r : {3U, 5U, 7U}) {
    for (u64 p : sieve_primes(120).primes()) {
      if (p % r != 1) continue;
      for (i64 k = 0; k < static_cast<i64>(p); ++k) {
        roots = roots && count_roots_via_characters(k, p, r) == static_cast<long>(count_roots(k, p, r).count);
      }
    }
  }
  check("root counts via characters", roots);
  bool corr = true;
  for (u64 p : {7ULL, 13ULL, 31ULL}) {
    for (const auto& s : split_prime_symbols(p, 3)) corr = corr && to_dirichlet(s).modulus() == p;
  }
  check("symbol/character correspondence", corr);
  check("sigma(7) = 14", sigma_q(7, 1, 0, 1, 3) == 14);
  bool recip = true;
  for (i64 a : {-15, -3, 2, 7, 30}) {
    for (i64 b : {-1, 5, 6, -21}) recip = recip && hilbert_product(a, b) == 1;
  }
  check("Hilbert reciprocity", recip);
  check("class list to 427", class_list(427).size() == 18);
  const auto pt = integral_point_search(make_variety(-3, 5, 6)).best();
  check("point on y^2 + 3z^2 = t^5 + 6", pt && verify_point(*pt, -3, 5, 6));
  check("duality gap (6, 10)", duality_gap(3, 6, 10) <= 1e-6);
  out.summary = {{"checks", out.table.rows.size()}};
  return out;
}

Output dispatch(const RunConfig& c) {
  const std::string& s = c.subcommand;
  if (s == "bh-run") return run_bh(c);
  if (s == "singular-series") return run_series(c);
  if (s == "sieve-lab") return run_sieve(c);
  if (s == "class-list") return run_class_list(c);
  if (s == "variety-solve") return run_variety(c);
  if (s == "density") return run_density(c);
  return run_selftest(c);
}

void usage(std::ostream& os) {
  os << "usage: kummer <subcommand> [options]\nsubcommands:";
  for (const auto& s : subcommands()) os << " " << s;
  os << "\nrun 'kummer <subcommand> --help' for options; worker count from " << kWorkersEnv << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2 || std::string(argv[1]) == "--help" || std::string(argv[1]) == "-h") {
    usage(argc < 2 ? std::cerr : std::cout);
    return argc < 2 ? 1 : 0;
  }
  const std::string sub = argv[1];
  const std::vector<std::string> args(argv + 2, argv + argc);
  for (const auto& a : args) {
    if (a == "--help" || a == "-h") {
      try {
        std::cout << "kummer " << sub << " options:\n";
        for (const auto& p : param_schema(sub)) std::cout << "  --" << p.name << "  " << p.help << " (default " << p.fallback.dump() << ")\n";
        std::cout << "  --seed, --workers, --out, --config\n";
        return 0;
      } catch (const UsageError& e) {
        std::cerr << "kummer: " << e.what() << "\n";
        return 1;
      }
    }
  }
  try {
    const RunConfig cfg = parse_config(sub, args);
    const auto start = std::chrono::steady_clock::now();
    Output out = dispatch(cfg);
    ResultManifest manifest;
    manifest.config = serialize(cfg);
    manifest.summary = out.summary;
    manifest.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!cfg.outputs.empty()) {
      emit(out.table, manifest, cfg.outputs.front());
    } else {
      std::cout << out.table.str();
      std::cerr << manifest.to_json().dump(2) << "\n";
    }
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "kummer: " << e.what() << "\n";
    return 1;
  } catch (const PreconditionError& e) {
    std::cerr << "kummer: " << e.what() << "\n";
    return 1;
  } catch (const InvariantViolation& e) {
    std::cerr << "kummer: invariant violation: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "kummer: " << e.what() << "\n";
    return 2;
  }
}
