#include "opg/regret.hpp"

#include "opg/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <utility>

namespace opg {

void RegretLedger::append(LedgerRecord rec) {
  const auto expected = static_cast<std::int64_t>(records_.size()) + 1;
  if (rec.t != expected)
    throw ConfigError("RegretLedger: rounds must be appended contiguously starting at 1");
  if (rec.x.size() != rec.u.size() || rec.x.size() != rec.grad_f.size() ||
      rec.x.size() != rec.grad_r.size())
    throw ConfigError("RegretLedger: record vectors disagree in dimension");
  if (!(rec.eta > 0.0)) throw ConfigError("RegretLedger: eta must be positive");
  records_.push_back(std::move(rec));
}

void RegretLedger::set_final_iterate(Vec x_next) {
  if (records_.empty()) throw ConfigError("RegretLedger: no rounds recorded");
  if (x_next.size() != records_.back().x.size())
    throw ConfigError("RegretLedger: final iterate dimension mismatch");
  final_ = std::move(x_next);
  has_final_ = true;
}

const Vec &RegretLedger::final_iterate() const {
  if (!has_final_) throw ConfigError("RegretLedger: final iterate not set");
  return final_;
}

ComparatorMode comparator_mode_from_string(const std::string &name) {
  if (name == "per_round_minimizer") return ComparatorMode::per_round_minimizer;
  if (name == "fixed") return ComparatorMode::fixed;
  if (name == "planted") return ComparatorMode::planted;
  if (name == "user_supplied") return ComparatorMode::user_supplied;
  throw ConfigError("unknown comparator mode: " + name);
}

std::string to_string(ComparatorMode mode) {
  switch (mode) {
    case ComparatorMode::per_round_minimizer: return "per_round_minimizer";
    case ComparatorMode::fixed: return "fixed";
    case ComparatorMode::planted: return "planted";
    case ComparatorMode::user_supplied: return "user_supplied";
  }
  return "?";
}

double path_variation(const std::vector<Vec> &comparators, double beta) {
  if (beta < 0.0 || beta >= 1.0) throw ConfigError("path_variation: beta must lie in [0, 1)");
  if (comparators.empty()) throw ConfigError("path_variation: empty comparator sequence");
  double d = 0.0;
  for (std::size_t t = 1; t < comparators.size(); ++t) {
    if (comparators[t].size() != comparators[0].size())
      throw ConfigError("path_variation: comparator dimension mismatch");
    // round index is 1-based: entry t corresponds to u_{t+1}
    d += std::pow(static_cast<double>(t + 1), beta) * dist(comparators[t], comparators[t - 1]);
  }
  return d;
}

double dynamic_regret(const RegretLedger &ledger, std::int64_t upto) {
  if (upto <= 0 || upto > ledger.rounds()) upto = ledger.rounds();
  double reg = 0.0;
  for (std::int64_t i = 0; i < upto; ++i) {
    const auto &rec = ledger.records()[static_cast<std::size_t>(i)];
    reg += rec.loss_x - rec.loss_u;
  }
  return reg;
}

double theorem1_bound(double big_r, double big_m, std::int64_t horizon, double beta, double gamma,
                      double d_beta) {
  if (!(big_r > 0.0) || !(big_m > 0.0)) throw ConfigError("theorem1_bound: R and M must be positive");
  if (horizon < 1) throw ConfigError("theorem1_bound: horizon must be at least 1");
  if (beta < 0.0 || beta >= 1.0 || gamma < beta || gamma >= 1.0)
    throw ConfigError("theorem1_bound: need 0 <= beta <= gamma < 1");
  if (d_beta < 0.0) throw ConfigError("theorem1_bound: path variation must be nonnegative");
  const double big_t = static_cast<double>(horizon);
  return std::sqrt(big_m * big_m *
                   (2.0 * big_r * std::pow(big_t, 1.0 - beta) * d_beta + big_t * big_r * big_r) /
                   (1.0 - gamma));
}

double theorem2_bound(double big_r, double big_m, std::int64_t horizon, double beta, double delta,
                      double d_beta) {
  if (!(big_r > 0.0) || !(big_m > 0.0)) throw ConfigError("theorem2_bound: R and M must be positive");
  if (horizon < 1) throw ConfigError("theorem2_bound: horizon must be at least 1");
  if (beta < 0.0 || beta >= 1.0) throw ConfigError("theorem2_bound: beta must lie in [0, 1)");
  if (!(delta > 0.0)) throw ConfigError("theorem2_bound: delta must be positive");
  if (d_beta < 0.0) throw ConfigError("theorem2_bound: path variation must be nonnegative");
  const double big_t = static_cast<double>(horizon);
  return big_m * big_m / (2.0 * delta * big_r) * (1.0 + std::log(big_t)) *
         (2.0 * std::pow(big_t, -beta) * d_beta + big_r);
}

namespace {

double lemma1_slack_impl(const LedgerRecord &rec, const Vec &x_next, double mu) {
  const double lhs = rec.loss_x - rec.loss_u;
  const double du_x = dist_sq(rec.u, rec.x);
  const double du_xn = dist_sq(rec.u, x_next);
  const double gnorm = norm_sq(add(rec.grad_f, rec.grad_r));
  const double rhs = 0.5 * (1.0 / rec.eta - mu) * du_x - du_xn / (2.0 * rec.eta) +
                     0.5 * rec.eta * gnorm;
  return rhs - lhs;
}

AuditResult make_lemma1_result(double slack, std::int64_t t) {
  AuditResult res;
  res.slack = slack;
  res.pass = slack >= -kLemma1Tol;
  if (!res.pass)
    res.detail = "per-round inequality violated at t = " + std::to_string(t) +
                 " (slack " + std::to_string(slack) + ")";
  return res;
}

}  // namespace

AuditResult lemma1_audit(const LedgerRecord &rec_t, const LedgerRecord &rec_next, double mu) {
  if (rec_next.t != rec_t.t + 1)
    throw ConfigError("lemma1_audit: records are not consecutive rounds");
  if (mu < 0.0) throw ConfigError("lemma1_audit: mu must be nonnegative");
  return make_lemma1_result(lemma1_slack_impl(rec_t, rec_next.x, mu), rec_t.t);
}

AuditResult lemma1_audit_final(const LedgerRecord &rec_t, const Vec &x_next, double mu) {
  if (mu < 0.0) throw ConfigError("lemma1_audit: mu must be nonnegative");
  if (x_next.size() != rec_t.x.size())
    throw ConfigError("lemma1_audit: next iterate dimension mismatch");
  return make_lemma1_result(lemma1_slack_impl(rec_t, x_next, mu), rec_t.t);
}

std::vector<double> lemma1_slacks(const RegretLedger &ledger, double mu) {
  if (mu < 0.0) throw ConfigError("lemma1_slacks: mu must be nonnegative");
  const auto &recs = ledger.records();
  std::vector<double> slacks;
  slacks.reserve(recs.size());
  for (std::size_t i = 0; i + 1 < recs.size(); ++i)
    slacks.push_back(lemma1_slack_impl(recs[i], recs[i + 1].x, mu));
  if (!recs.empty())
    slacks.push_back(lemma1_slack_impl(recs.back(), ledger.final_iterate(), mu));
  return slacks;
}

AuditResult telescope_audit(const RegretLedger &ledger, double big_r) {
  if (!(big_r > 0.0)) throw ConfigError("telescope_audit: diameter must be positive");
  const auto &recs = ledger.records();
  if (recs.empty()) throw ConfigError("telescope_audit: empty ledger");
  for (std::size_t i = 1; i < recs.size(); ++i)
    if (recs[i].eta > recs[i - 1].eta)
      throw ConfigError("telescope_audit: step sizes increase at t = " +
                        std::to_string(recs[i].t) + "; the inequality requires non-increasing steps");

  const std::size_t big_t = recs.size();
  double lhs = 0.0;
  double drift_sum = 0.0;
  for (std::size_t i = 0; i < big_t; ++i) {
    const auto &rec = recs[i];
    const Vec &x_next = (i + 1 < big_t) ? recs[i + 1].x : ledger.final_iterate();
    lhs += (dist_sq(rec.u, rec.x) - dist_sq(rec.u, x_next)) / rec.eta;
    if (i + 1 < big_t) drift_sum += dist(recs[i + 1].u, rec.u) / rec.eta;
  }
  const double rhs = 2.0 * big_r * drift_sum + big_r * big_r / recs.back().eta;

  AuditResult res;
  res.slack = rhs - lhs;
  res.pass = res.slack >= -kLemma1Tol * static_cast<double>(big_t);
  if (!res.pass)
    res.detail = "telescoping inequality violated (slack " + std::to_string(res.slack) + ")";
  return res;
}

void export_ledger_csv(const RegretLedger &ledger, double mu, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw IoError("export_ledger_csv: cannot open " + path);
  out << "t,eta,loss_x,loss_u,cum_regret,lemma1_slack,"
         "dist_u_x_sq,dist_u_xnext_sq,u_drift,grad_norm_sq\n";
  const auto slacks = lemma1_slacks(ledger, mu);
  const auto &recs = ledger.records();
  double cum = 0.0;
  char buf[512];
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto &rec = recs[i];
    cum += rec.loss_x - rec.loss_u;
    const Vec &x_next = (i + 1 < recs.size()) ? recs[i + 1].x : ledger.final_iterate();
    const double drift = (i == 0) ? 0.0 : dist(rec.u, recs[i - 1].u);
    std::snprintf(buf, sizeof(buf),
                  "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(rec.t), rec.eta, rec.loss_x, rec.loss_u, cum, slacks[i],
                  dist_sq(rec.u, rec.x), dist_sq(rec.u, x_next), drift,
                  norm_sq(add(rec.grad_f, rec.grad_r)));
    out << buf;
  }
  if (!out) throw IoError("export_ledger_csv: write failed for " + path);
}

}  // namespace opg
