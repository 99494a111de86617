#pragma once

#include "opg/vec.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace opg {

// Everything the auditors and regret evaluators need about one round: the played
// point, the comparator, the step, both composite losses, and the subgradients the
// learner actually computed at the played point.
struct LedgerRecord {
  std::int64_t t = 0;
  Vec x;          // played point x_t
  Vec u;          // comparator u_t
  double eta = 0.0;
  double loss_x = 0.0;  // F_t(x_t)
  double loss_u = 0.0;  // F_t(u_t)
  Vec grad_f;     // subgradient of f_t at x_t used by the step
  Vec grad_r;     // subgradient of r_t at x_t
};

class RegretLedger {
 public:
  void append(LedgerRecord rec);
  // The point produced by the final round's step (x_{T+1}); required before the
  // round-T slack can be audited.
  void set_final_iterate(Vec x_next);

  const std::vector<LedgerRecord> &records() const { return records_; }
  bool has_final_iterate() const { return has_final_; }
  const Vec &final_iterate() const;
  std::int64_t rounds() const { return static_cast<std::int64_t>(records_.size()); }

 private:
  std::vector<LedgerRecord> records_;
  Vec final_;
  bool has_final_ = false;
};

enum class ComparatorMode { per_round_minimizer, fixed, planted, user_supplied };
ComparatorMode comparator_mode_from_string(const std::string &name);
std::string to_string(ComparatorMode mode);

struct ComparatorSequence {
  ComparatorMode mode = ComparatorMode::fixed;
  std::vector<Vec> points;
};

// D_beta(T) = sum_{t=2}^T t^beta * ||u_t - u_{t-1}||, beta in [0, 1).
double path_variation(const std::vector<Vec> &comparators, double beta);

// sum_t F_t(x_t) - F_t(u_t) over the first `upto` rounds (upto = 0 means all).
double dynamic_regret(const RegretLedger &ledger, std::int64_t upto = 0);

// sqrt(M^2 (2R T^{1-beta} D_beta + T R^2) / (1 - gamma))
double theorem1_bound(double big_r, double big_m, std::int64_t horizon, double beta, double gamma,
                      double d_beta);

// (M^2 / (2 delta R)) (1 + log T) (2 T^{-beta} D_beta + R)
double theorem2_bound(double big_r, double big_m, std::int64_t horizon, double beta, double delta,
                      double d_beta);

struct AuditResult {
  bool pass = false;
  double slack = 0.0;  // right side minus left side; negative beyond tolerance fails
  std::string detail;
};

// Per-round inequality  F_t(x_t) - F_t(u_t) <=
//   (1/2)(1/eta_t - mu)||u_t - x_t||^2 - (1/(2 eta_t))||u_t - x_{t+1}||^2
//   + (eta_t/2)||grad_f + grad_r||^2
// evaluated from two consecutive records of an OPG run (x_{t+1} comes from the later
// record). Pass tolerance: slack >= -1e-9.
AuditResult lemma1_audit(const LedgerRecord &rec_t, const LedgerRecord &rec_next, double mu);
// Same check with an explicit next iterate (used for the final round).
AuditResult lemma1_audit_final(const LedgerRecord &rec_t, const Vec &x_next, double mu);
// All rounds of a ledger (requires the final iterate). Returns per-round slacks.
std::vector<double> lemma1_slacks(const RegretLedger &ledger, double mu);

// Whole-run inequality  sum_t (1/eta_t)(||u_t-x_t||^2 - ||u_t-x_{t+1}||^2) <=
//   2R sum_{t<T} (1/eta_t)||u_{t+1}-u_t|| + R^2/eta_T
// for non-increasing steps (increasing steps are a precondition violation, reported
// as an error, not a failed audit). Pass tolerance: slack >= -1e-9 * T.
AuditResult telescope_audit(const RegretLedger &ledger, double big_r);

// Ledger CSV: the six contract columns first, then four audit-replay columns
// (squared distances, comparator drift, squared subgradient norm) so the audits can
// be re-run from the file alone. Floats carry 17 significant digits.
void export_ledger_csv(const RegretLedger &ledger, double mu, const std::string &path);

constexpr double kLemma1Tol = 1e-9;

}  // namespace opg
