#include "opg/errors.hpp"
#include "opg/experiment.hpp"
#include "opg/oracle.hpp"
#include "opg/regularizer.hpp"
#include "opg/rng.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace opg;

int cmd_run(const std::string &config_path, const std::string &out_dir, std::int64_t seed,
            std::int64_t repetitions, std::int64_t horizon, int threads) {
  ExperimentConfig cfg = load_config(config_path);
  if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
  if (repetitions > 0) cfg.repetitions = repetitions;
  if (horizon > 0) cfg.horizon = horizon;
  if (threads >= 0) cfg.threads = threads;
  cfg.validate();

  const ExperimentArtifacts artifacts = run_experiment(cfg);
  emit_results(artifacts, out_dir);

  for (const auto &res : artifacts.algos) {
    std::printf("%-5s T=%lld  mean_avg_regret=%.6g  std=%.6g", to_string(res.config.algo).c_str(),
                static_cast<long long>(cfg.horizon), res.mean_avg_regret.back(),
                res.std_avg_regret.back());
    if (!std::isnan(res.mean_bound)) std::printf("  bound=%.6g", res.mean_bound);
    std::printf("\n");
  }
  std::printf("audits: %s\n", artifacts.audits_pass ? "pass" : "FAIL");
  std::printf("wrote %s\n", out_dir.c_str());
  if (!artifacts.audits_pass) throw AuditError("runtime inequality audits failed");
  return 0;
}

struct LedgerRow {
  std::int64_t t = 0;
  double eta = 0.0, loss_x = 0.0, loss_u = 0.0, cum = 0.0, slack = 0.0;
  double d_ux = 0.0, d_uxn = 0.0, drift = 0.0, g2 = 0.0;
};

std::vector<LedgerRow> read_ledger(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open ledger " + path);
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  const std::string header =
      "t,eta,loss_x,loss_u,cum_regret,lemma1_slack,dist_u_x_sq,dist_u_xnext_sq,u_drift,"
      "grad_norm_sq";
  if (line != header) throw IoError(path + ": line 1: unexpected header");

  std::vector<LedgerRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<double> fields;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        std::size_t used = 0;
        fields.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception &) {
        throw IoError(path + ": line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
    }
    if (fields.size() != 10)
      throw IoError(path + ": line " + std::to_string(lineno) + ": expected 10 columns, got " +
                    std::to_string(fields.size()));
    LedgerRow r;
    r.t = static_cast<std::int64_t>(fields[0]);
    r.eta = fields[1];
    r.loss_x = fields[2];
    r.loss_u = fields[3];
    r.cum = fields[4];
    r.slack = fields[5];
    r.d_ux = fields[6];
    r.d_uxn = fields[7];
    r.drift = fields[8];
    r.g2 = fields[9];
    rows.push_back(r);
  }
  if (rows.empty()) throw IoError(path + ": no data rows");
  return rows;
}

int cmd_audit(const std::string &ledger_path, double diameter, double mu) {
  const auto rows = read_ledger(ledger_path);
  const auto T = static_cast<std::int64_t>(rows.size());
  bool ok = true;

  double cum = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto &r = rows[i];
    if (r.t != static_cast<std::int64_t>(i) + 1)
      throw IoError(ledger_path + ": rounds are not contiguous from 1");
    if (!(r.eta > 0.0)) throw ConfigError("audit: eta must be positive at every round");
    cum += r.loss_x - r.loss_u;
    if (std::abs(cum - r.cum) > 1e-9 * std::max(1.0, std::abs(r.cum))) {
      std::printf("cum_regret: MISMATCH at t=%lld (recomputed %.17g, recorded %.17g)\n",
                  static_cast<long long>(r.t), cum, r.cum);
      ok = false;
    }
  }
  if (ok) std::printf("cum_regret: consistent (final %.6g)\n", cum);

  int lemma1_bad = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (const auto &r : rows) {
    const double lhs = r.loss_x - r.loss_u;
    const double rhs =
        0.5 * (1.0 / r.eta - mu) * r.d_ux - r.d_uxn / (2.0 * r.eta) + 0.5 * r.eta * r.g2;
    const double slack = rhs - lhs;
    min_slack = std::min(min_slack, slack);
    if (std::abs(slack - r.slack) > 1e-6 * std::max(1.0, std::abs(r.slack))) {
      std::printf("lemma1: recorded slack diverges at t=%lld (recomputed %.17g, recorded %.17g)\n",
                  static_cast<long long>(r.t), slack, r.slack);
      ok = false;
    }
    if (slack < -kLemma1Tol) ++lemma1_bad;
  }
  if (lemma1_bad > 0) {
    std::printf("lemma1: FAIL (%d rounds below tolerance, min slack %.3g)\n", lemma1_bad,
                min_slack);
    ok = false;
  } else {
    std::printf("lemma1: pass (min slack %.3g over %lld rounds)\n", min_slack,
                static_cast<long long>(T));
  }

  if (!(diameter > 0.0)) {
    std::printf("telescope: skipped (pass --diameter to enable)\n");
  } else {
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].eta > rows[i - 1].eta)
        throw ConfigError("audit: telescope needs non-increasing steps, eta increases at t=" +
                          std::to_string(rows[i].t));
    double lhs = 0.0, cross = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      lhs += (rows[i].d_ux - rows[i].d_uxn) / rows[i].eta;
      if (i > 0) cross += rows[i].drift / rows[i - 1].eta;
    }
    const double rhs = 2.0 * diameter * cross + diameter * diameter / rows.back().eta;
    const double slack = rhs - lhs;
    if (slack >= -kLemma1Tol * static_cast<double>(T)) {
      std::printf("telescope: pass (slack %.6g)\n", slack);
    } else {
      std::printf("telescope: FAIL (slack %.6g)\n", slack);
      ok = false;
    }
  }

  std::printf("audit: %s\n", ok ? "PASS" : "FAIL");
  if (!ok) throw AuditError("ledger audit failed");
  return 0;
}

int cmd_prox_check(int instances, std::uint64_t seed) {
  Rng rng(seed);
  GridSpec grid{1e-4, 3};
  double worst = 0.0;
  for (int k = 0; k < instances; ++k) {
    const std::size_t n = 1 + rng.below(3);
    Vec lo(n), hi(n), x(n), w(n);
    for (std::size_t i = 0; i < n; ++i) {
      lo[i] = rng.uniform(-2.0, 0.0);
      hi[i] = lo[i] + rng.uniform(0.5, 3.0);
      x[i] = rng.uniform(lo[i] - 1.0, hi[i] + 1.0);
      w[i] = rng.uniform(0.05, 1.0);
    }
    const BoxSet box(lo, hi);
    const WeightedL1 r{rng.uniform(0.0, 2.0), w};
    const double eta = rng.uniform(1e-3, 2.0);
    const Vec closed = prox(r, eta, x, box);
    const Vec brute = brute_prox(r, eta, x, box, grid);
    for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(closed[i] - brute[i]));
  }
  std::printf("prox-check: %d instances, max coordinate deviation %.3g (tolerance 1e-3)\n",
              instances, worst);
  if (worst > 1e-3) throw AuditError("closed-form prox disagrees with grid search");
  std::printf("prox-check: PASS\n");
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"online composite optimization benchmark"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "results", ledger_path;
  std::int64_t seed = -1, repetitions = -1, horizon = -1;
  int threads = -1, instances = 200;
  std::uint64_t prox_seed = 7;
  double diameter = 0.0, mu = 0.0;

  auto *run = app.add_subcommand("run", "run a benchmark config and emit results");
  run->add_option("--config", config_path, "JSON config path")->required();
  run->add_option("--out", out_dir, "output directory (default: results)");
  run->add_option("--seed", seed, "override the config seed");
  run->add_option("--repetitions", repetitions, "override the repetition count");
  run->add_option("--horizon", horizon, "override the horizon");
  run->add_option("--threads", threads, "override the thread count");

  auto *audit = app.add_subcommand("audit", "re-run the inequality audits from a ledger CSV");
  audit->add_option("--ledger", ledger_path, "ledger CSV path")->required();
  audit->add_option("--diameter", diameter, "feasible-set diameter R (enables the telescope check)");
  audit->add_option("--mu", mu, "strong convexity used in the per-round check (default 0)");

  auto *prox = app.add_subcommand("prox-check", "compare the closed-form prox against grid search");
  prox->add_option("--instances", instances, "number of random instances (default 200)");
  prox->add_option("--seed", prox_seed, "instance generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (run->parsed()) return cmd_run(config_path, out_dir, seed, repetitions, horizon, threads);
    if (audit->parsed()) return cmd_audit(ledger_path, diameter, mu);
    return cmd_prox_check(instances, prox_seed);
  } catch (const opg::ConfigError &e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const opg::AuditError &e) {
    std::cerr << "audit error: " << e.what() << "\n";
    return 2;
  } catch (const opg::IoError &e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
