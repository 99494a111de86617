#pragma once

#include "opg/box.hpp"
#include "opg/learners.hpp"
#include "opg/losses.hpp"
#include "opg/oracle.hpp"
#include "opg/regret.hpp"
#include "opg/schedule.hpp"
#include "opg/stream.hpp"
#include "opg/vec.hpp"

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace opg {

// F1: nonsmooth loss + time-varying weighted l1. F2: the same plus a ridge term of
// strength lambda, making every round lambda-strongly convex.
enum class Objective { F1, F2 };
Objective objective_from_string(const std::string &name);
std::string to_string(Objective o);

// Where a theorem schedule's D_beta comes from: a supplied number, an exact
// precomputation from a comparator sequence available before the run, or the
// double-and-restart estimate.
enum class DBetaMode { supplied, precompute, doubling };

struct ScheduleConfig {
  ScheduleKind kind = ScheduleKind::inverse_t;
  double scale = 0.001;
  double gamma = 0.5;
  bool gamma_supplied = false;  // theorem2: use gamma directly instead of the closed form
  double sigma = 0.0;
  bool sigma_supplied = false;  // theorem1: use sigma directly
  double delta = 0.5;
  DBetaMode d_beta_mode = DBetaMode::supplied;
  double d_beta = 0.0;
  double big_m = 0.0;
  bool m_supplied = false;  // otherwise M is the stream's exact subgradient sup
  double u1_x1_sq = 0.0;
  bool u1_x1_true = false;  // q := ||u_1 - x_1||^2 measured from the comparator
};

struct AlgoConfig {
  Algo algo = Algo::OPG;
  ScheduleConfig schedule;  // OPG only
  double l0 = 1.0;          // SAGE
  double g0 = 1.0;          // ACSA
  double b0 = 1.0;          // RDA
};

struct StreamConfig {
  bool synthetic = true;
  SyntheticStreamSpec spec;
  std::string path;
  IngestFormat format = IngestFormat::csv;
  std::size_t declared_dim = 0;
};

struct ComparatorConfig {
  ComparatorMode mode = ComparatorMode::per_round_minimizer;
  Vec fixed_point;
  std::vector<Vec> supplied;
  double resolution = 1e-4;
};

struct ExperimentConfig {
  Objective objective = Objective::F1;
  std::int64_t horizon = 0;
  std::int64_t repetitions = 1;
  std::uint64_t seed = 1;
  double beta = 0.0;
  Vec box_lower;
  Vec box_upper;
  Vec x1;  // empty: projection of the origin into the box
  LossKind loss_kind = LossKind::hinge;
  double alpha = 2.0;
  double eps = 0.1;
  double rho = 0.4;
  double tau = 1.0;
  double eps_w = 0.1;
  bool adaptive_weights = true;
  double lambda = 1.0;
  StreamConfig stream;
  ComparatorConfig comparator;
  std::vector<AlgoConfig> algos;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
  BoxSet box() const;
  LossSpec loss_spec() const;
  double mu() const { return objective == Objective::F2 ? lambda : 0.0; }
  Vec start_point() const;
};

ExperimentConfig parse_config_json(const std::string &json_text);
ExperimentConfig load_config(const std::string &path);

constexpr double kNoBound = std::numeric_limits<double>::quiet_NaN();

struct RepStats {
  std::vector<double> regret;  // cumulative dynamic regret at each checkpoint
  double d_beta_realized = 0.0;
  double d_beta_schedule = 0.0;  // what a theorem schedule was built from (0 if n/a)
  double m_realized = 0.0;       // max ||grad_f + grad_r|| over the run
  double m_schedule = 0.0;       // M used by a theorem schedule (0 if n/a)
  double m_stream_sup = 0.0;     // exact subgradient sup of this rep's stream
  double bound = kNoBound;       // theorem bound for this rep (OPG theorem schedules)
  double u1_x1_sq = 0.0;
  int lemma1_violations = -1;  // -1: not audited (non-OPG)
  double lemma1_min_slack = 0.0;
  int telescope_pass = -1;  // -1: not audited
  double telescope_slack = 0.0;
  int doubling_restarts = 0;
};

struct AlgoResult {
  AlgoConfig config;
  std::vector<std::int64_t> checkpoints;
  std::vector<RepStats> reps;
  std::vector<double> mean_avg_regret;  // per checkpoint, mean over reps of regret/T
  std::vector<double> std_avg_regret;   // sample standard deviation (0 for one rep)
  double mean_bound = kNoBound;         // mean per-rep bound at the final checkpoint
  RegretLedger first_rep_ledger;
};

struct ExperimentArtifacts {
  ExperimentConfig config;
  std::vector<AlgoResult> algos;
  bool audits_pass = true;
  double comparator_error_bound = 0.0;  // worst-case regret error induced by grid comparators
};

ExperimentArtifacts run_experiment(const ExperimentConfig &config);

// Writes regret_curve.csv, summary.json, and one <ALGO>_ledger.csv per algorithm
// (first repetition) into out_dir, creating it if needed. Rerunning the same config
// reproduces every file byte for byte.
void emit_results(const ExperimentArtifacts &artifacts, const std::string &out_dir);

// Exact sup over the box of ||grad f_t + grad r_t|| for a concrete stream prefix:
// max_t slope*||a_t|| + lambda * max box norm + rho * sqrt(n).
double stream_subgradient_bound(const LossSpec &loss, const std::vector<LabeledExample> &examples,
                                std::int64_t horizon, const BoxSet &box, double rho);

std::vector<std::int64_t> checkpoint_grid(std::int64_t horizon);

}  // namespace opg
