#include "opg/experiment.hpp"

#include "opg/errors.hpp"
#include "opg/regularizer.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <thread>
#include <utility>

namespace opg {

using nlohmann::json;
using nlohmann::ordered_json;

Objective objective_from_string(const std::string &name) {
  if (name == "F1") return Objective::F1;
  if (name == "F2") return Objective::F2;
  throw ConfigError("unknown objective: " + name + " (expected F1 or F2)");
}

std::string to_string(Objective o) { return o == Objective::F1 ? "F1" : "F2"; }

void ExperimentConfig::validate() const {
  if (horizon < 1) throw ConfigError("config: horizon must be at least 1");
  if (repetitions < 1) throw ConfigError("config: repetitions must be at least 1");
  if (beta < 0.0 || beta >= 1.0) throw ConfigError("config: beta must lie in [0, 1)");
  if (threads < 0) throw ConfigError("config: threads must be nonnegative");
  const BoxSet set = box();  // validates bounds
  if (!x1.empty() && (x1.size() != set.dim() || !set.contains(x1)))
    throw ConfigError("config: x1 must be a feasible point of the box");
  loss_spec().validate();
  if (rho < 0.0) throw ConfigError("config: rho must be nonnegative");
  WeightRule{tau, eps_w}.validate();
  if (objective == Objective::F2 && !(lambda > 0.0))
    throw ConfigError("config: objective F2 needs lambda > 0");

  if (stream.synthetic) {
    stream.spec.validate();
    if (stream.spec.dimension != set.dim())
      throw ConfigError("config: stream dimension must match the box dimension");
    const bool regression_loss = is_regression(loss_kind);
    const bool regression_stream = stream.spec.family == StreamFamily::regression;
    if (regression_loss != regression_stream)
      throw ConfigError("config: stream family must match the loss kind (classification losses "
                        "take classification streams, regression losses regression streams)");
  } else {
    if (stream.path.empty()) throw ConfigError("config: file stream needs a path");
    if (comparator.mode == ComparatorMode::planted)
      throw ConfigError("config: planted comparators exist only for synthetic streams");
  }

  if (!(comparator.resolution > 0.0))
    throw ConfigError("config: comparator resolution must be positive");
  if (comparator.mode == ComparatorMode::per_round_minimizer && set.dim() > 3)
    throw ConfigError("config: per-round-minimizer comparators use full grids, dimension cap is 3");
  if (comparator.mode == ComparatorMode::fixed) {
    if (comparator.fixed_point.size() != set.dim() || !set.contains(comparator.fixed_point))
      throw ConfigError("config: fixed comparator must be a feasible point");
  }
  if (comparator.mode == ComparatorMode::user_supplied) {
    if (static_cast<std::int64_t>(comparator.supplied.size()) < horizon)
      throw ConfigError("config: user-supplied comparator sequence shorter than the horizon");
    for (const auto &u : comparator.supplied)
      if (u.size() != set.dim() || !set.contains(u))
        throw ConfigError("config: user-supplied comparator is infeasible");
  }

  if (algos.empty()) throw ConfigError("config: no algorithms requested");
  for (std::size_t i = 0; i < algos.size(); ++i)
    for (std::size_t j = i + 1; j < algos.size(); ++j)
      if (algos[i].algo == algos[j].algo)
        throw ConfigError("config: duplicate algorithm " + to_string(algos[i].algo));

  const bool comp_precomputable =
      comparator.mode != ComparatorMode::per_round_minimizer || !adaptive_weights;
  for (const auto &a : algos) {
    if (a.algo != Algo::OPG) continue;
    const auto &s = a.schedule;
    const bool theorem_kind =
        s.kind == ScheduleKind::theorem1 || s.kind == ScheduleKind::theorem2;
    if (!theorem_kind) continue;
    if ((s.d_beta_mode == DBetaMode::precompute || s.u1_x1_true) && !comp_precomputable)
      throw ConfigError(
          "config: theorem schedules need the comparator before the run; with adaptive weights "
          "and per-round minimizers, supply d_beta, use doubling, or switch to fixed weights");
    if (s.d_beta_mode == DBetaMode::supplied && s.d_beta < 0.0)
      throw ConfigError("config: supplied d_beta must be nonnegative");
    if (s.kind == ScheduleKind::theorem2 && mu() <= 0.0)
      throw ConfigError("config: theorem2 schedule needs a strongly convex objective (F2)");
  }
}

BoxSet ExperimentConfig::box() const { return BoxSet(box_lower, box_upper); }

LossSpec ExperimentConfig::loss_spec() const {
  LossSpec s;
  s.kind = loss_kind;
  s.alpha = alpha;
  s.eps = eps;
  s.lambda = objective == Objective::F2 ? lambda : 0.0;
  return s;
}

Vec ExperimentConfig::start_point() const {
  const BoxSet set = box();
  if (x1.empty()) return set.project(Vec(set.dim(), 0.0));
  return x1;
}

std::vector<std::int64_t> checkpoint_grid(std::int64_t horizon) {
  std::vector<std::int64_t> cps;
  for (std::int64_t c = 1; c <= horizon; c *= 2) cps.push_back(c);
  if (cps.empty() || cps.back() != horizon) cps.push_back(horizon);
  return cps;
}

double stream_subgradient_bound(const LossSpec &loss, const std::vector<LabeledExample> &examples,
                                std::int64_t horizon, const BoxSet &box, double rho) {
  const double slope = loss.kind == LossKind::generalized_hinge ? loss.alpha : 1.0;
  double max_a = 0.0;
  const auto upto = std::min<std::size_t>(examples.size(), static_cast<std::size_t>(horizon));
  for (std::size_t i = 0; i < upto; ++i) max_a = std::max(max_a, norm(examples[i].features));
  double box_norm_sq = 0.0;
  for (std::size_t i = 0; i < box.dim(); ++i) {
    const double m = std::max(std::abs(box.lower()[i]), std::abs(box.upper()[i]));
    box_norm_sq += m * m;
  }
  return slope * max_a + loss.lambda * std::sqrt(box_norm_sq) +
         rho * std::sqrt(static_cast<double>(box.dim()));
}

// ---------- config parsing ----------

namespace {

void expect_keys(const json &obj, const char *where, std::initializer_list<const char *> keys) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char *k : keys)
      if (it.key() == k) {
        known = true;
        break;
      }
    if (!known)
      throw ConfigError(std::string("config: unknown key '") + it.key() + "' in " + where);
  }
}

double num_or(const json &obj, const char *key, double dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number()) throw ConfigError(std::string("config: ") + key + " must be a number");
  return obj[key].get<double>();
}

std::int64_t int_or(const json &obj, const char *key, std::int64_t dflt) {
  if (!obj.contains(key)) return dflt;
  if (!obj[key].is_number_integer())
    throw ConfigError(std::string("config: ") + key + " must be an integer");
  return obj[key].get<std::int64_t>();
}

std::string str_req(const json &obj, const char *key, const char *where) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw ConfigError(std::string("config: ") + where + " needs string key '" + key + "'");
  return obj[key].get<std::string>();
}

Vec vec_field(const json &obj, const char *key) {
  if (!obj.contains(key)) return {};
  if (!obj[key].is_array()) throw ConfigError(std::string("config: ") + key + " must be an array");
  Vec v;
  for (const auto &e : obj[key]) {
    if (!e.is_number()) throw ConfigError(std::string("config: ") + key + " must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

ScheduleConfig parse_schedule(const json &obj) {
  expect_keys(obj, "schedule",
              {"kind", "scale", "gamma", "sigma", "delta", "d_beta", "m", "u1_x1_sq"});
  ScheduleConfig s;
  s.kind = schedule_kind_from_string(str_req(obj, "kind", "schedule"));
  s.scale = num_or(obj, "scale", s.scale);
  if (obj.contains("gamma")) {
    s.gamma = num_or(obj, "gamma", s.gamma);
    s.gamma_supplied = true;
  }
  if (obj.contains("sigma")) {
    s.sigma = num_or(obj, "sigma", s.sigma);
    s.sigma_supplied = true;
  }
  s.delta = num_or(obj, "delta", s.delta);
  if (obj.contains("d_beta")) {
    if (obj["d_beta"].is_string()) {
      const auto mode = obj["d_beta"].get<std::string>();
      if (mode == "precompute")
        s.d_beta_mode = DBetaMode::precompute;
      else if (mode == "doubling")
        s.d_beta_mode = DBetaMode::doubling;
      else
        throw ConfigError("config: d_beta must be a number, 'precompute', or 'doubling'");
    } else if (obj["d_beta"].is_number()) {
      s.d_beta_mode = DBetaMode::supplied;
      s.d_beta = obj["d_beta"].get<double>();
    } else {
      throw ConfigError("config: d_beta must be a number, 'precompute', or 'doubling'");
    }
  }
  if (obj.contains("m")) {
    if (obj["m"].is_string()) {
      if (obj["m"].get<std::string>() != "stream")
        throw ConfigError("config: m must be a number or 'stream'");
    } else if (obj["m"].is_number()) {
      s.big_m = obj["m"].get<double>();
      s.m_supplied = true;
    } else {
      throw ConfigError("config: m must be a number or 'stream'");
    }
  }
  if (obj.contains("u1_x1_sq")) {
    if (obj["u1_x1_sq"].is_string()) {
      if (obj["u1_x1_sq"].get<std::string>() != "true")
        throw ConfigError("config: u1_x1_sq must be a number or 'true'");
      s.u1_x1_true = true;
    } else if (obj["u1_x1_sq"].is_number()) {
      s.u1_x1_sq = obj["u1_x1_sq"].get<double>();
    } else {
      throw ConfigError("config: u1_x1_sq must be a number or 'true'");
    }
  }
  return s;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string &json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception &e) {
    throw ConfigError(std::string("config: JSON parse failed: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config: top level must be an object");
  expect_keys(root, "top level",
              {"objective", "horizon", "repetitions", "seed", "beta", "box", "x1", "loss",
               "regularizer", "lambda", "stream", "comparator", "algorithms", "threads"});

  ExperimentConfig cfg;
  cfg.objective = objective_from_string(str_req(root, "objective", "top level"));
  cfg.horizon = int_or(root, "horizon", 0);
  cfg.repetitions = int_or(root, "repetitions", 1);
  cfg.seed = static_cast<std::uint64_t>(int_or(root, "seed", 1));
  cfg.beta = num_or(root, "beta", 0.0);
  cfg.threads = static_cast<int>(int_or(root, "threads", 0));
  cfg.lambda = num_or(root, "lambda", cfg.lambda);

  if (!root.contains("box") || !root["box"].is_object())
    throw ConfigError("config: box object is required");
  const json &box = root["box"];
  expect_keys(box, "box", {"dimension", "low", "high", "lower", "upper"});
  if (box.contains("lower") || box.contains("upper")) {
    cfg.box_lower = vec_field(box, "lower");
    cfg.box_upper = vec_field(box, "upper");
  } else {
    const auto dim = int_or(box, "dimension", 0);
    if (dim < 1) throw ConfigError("config: box dimension must be at least 1");
    cfg.box_lower.assign(static_cast<std::size_t>(dim), num_or(box, "low", -1.0));
    cfg.box_upper.assign(static_cast<std::size_t>(dim), num_or(box, "high", 1.0));
  }
  cfg.x1 = vec_field(root, "x1");

  if (root.contains("loss")) {
    const json &loss = root["loss"];
    expect_keys(loss, "loss", {"kind", "alpha", "eps"});
    cfg.loss_kind = loss_kind_from_string(str_req(loss, "kind", "loss"));
    cfg.alpha = num_or(loss, "alpha", cfg.alpha);
    cfg.eps = num_or(loss, "eps", cfg.eps);
  }
  if (root.contains("regularizer")) {
    const json &reg = root["regularizer"];
    expect_keys(reg, "regularizer", {"rho", "tau", "eps_w", "weight_mode"});
    cfg.rho = num_or(reg, "rho", cfg.rho);
    cfg.tau = num_or(reg, "tau", cfg.tau);
    cfg.eps_w = num_or(reg, "eps_w", cfg.eps_w);
    if (reg.contains("weight_mode")) {
      const auto mode = str_req(reg, "weight_mode", "regularizer");
      if (mode == "adaptive")
        cfg.adaptive_weights = true;
      else if (mode == "fixed")
        cfg.adaptive_weights = false;
      else
        throw ConfigError("config: weight_mode must be 'adaptive' or 'fixed'");
    }
  }

  if (!root.contains("stream") || !root["stream"].is_object())
    throw ConfigError("config: stream object is required");
  const json &stream = root["stream"];
  const std::string source = str_req(stream, "source", "stream");
  if (source == "synthetic") {
    expect_keys(stream, "stream",
                {"source", "dimension", "drift", "drift_magnitude", "drift_decay", "noise_rate",
                 "feature_scale", "path_amplitude"});
    cfg.stream.synthetic = true;
    auto &spec = cfg.stream.spec;
    spec.dimension = static_cast<std::size_t>(int_or(stream, "dimension", 1));
    spec.drift = drift_model_from_string(str_req(stream, "drift", "stream"));
    spec.drift_magnitude = num_or(stream, "drift_magnitude", 0.0);
    spec.drift_decay = num_or(stream, "drift_decay", 0.0);
    spec.noise_rate = num_or(stream, "noise_rate", 0.0);
    spec.feature_scale = num_or(stream, "feature_scale", 1.0);
    spec.path_amplitude = num_or(stream, "path_amplitude", 0.6);
    spec.family =
        is_regression(cfg.loss_kind) ? StreamFamily::regression : StreamFamily::classification;
  } else if (source == "file") {
    expect_keys(stream, "stream", {"source", "path", "format", "dimension"});
    cfg.stream.synthetic = false;
    cfg.stream.path = str_req(stream, "path", "stream");
    cfg.stream.format = ingest_format_from_string(str_req(stream, "format", "stream"));
    cfg.stream.declared_dim = static_cast<std::size_t>(int_or(stream, "dimension", 0));
  } else {
    throw ConfigError("config: stream source must be 'synthetic' or 'file'");
  }

  if (root.contains("comparator")) {
    const json &comp = root["comparator"];
    expect_keys(comp, "comparator", {"mode", "point", "points", "resolution"});
    cfg.comparator.mode = comparator_mode_from_string(str_req(comp, "mode", "comparator"));
    cfg.comparator.resolution = num_or(comp, "resolution", cfg.comparator.resolution);
    cfg.comparator.fixed_point = vec_field(comp, "point");
    if (comp.contains("points")) {
      if (!comp["points"].is_array()) throw ConfigError("config: comparator points must be an array");
      for (const auto &p : comp["points"]) {
        Vec v;
        for (const auto &e : p) v.push_back(e.get<double>());
        cfg.comparator.supplied.push_back(std::move(v));
      }
    }
  }

  if (!root.contains("algorithms") || !root["algorithms"].is_object())
    throw ConfigError("config: algorithms object is required");
  const json &algos = root["algorithms"];
  for (const char *name : {"OPG", "SAGE", "ACSA", "RDA"}) {
    if (!algos.contains(name)) continue;
    const json &a = algos[name];
    AlgoConfig ac;
    ac.algo = algo_from_string(name);
    switch (ac.algo) {
      case Algo::OPG:
        expect_keys(a, "OPG", {"schedule"});
        if (!a.contains("schedule") || !a["schedule"].is_object())
          throw ConfigError("config: OPG needs a schedule object");
        ac.schedule = parse_schedule(a["schedule"]);
        break;
      case Algo::SAGE:
        expect_keys(a, "SAGE", {"l0"});
        ac.l0 = num_or(a, "l0", 1.0);
        break;
      case Algo::ACSA:
        expect_keys(a, "ACSA", {"g0"});
        ac.g0 = num_or(a, "g0", 1.0);
        break;
      case Algo::RDA:
        expect_keys(a, "RDA", {"b0"});
        ac.b0 = num_or(a, "b0", 1.0);
        break;
    }
    cfg.algos.push_back(ac);
  }
  for (auto it = algos.begin(); it != algos.end(); ++it)
    if (it.key() != "OPG" && it.key() != "SAGE" && it.key() != "ACSA" && it.key() != "RDA")
      throw ConfigError("config: unknown algorithm '" + it.key() + "'");

  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_json(ss.str());
}

// ---------- the run itself ----------

namespace {

struct RepInput {
  std::vector<LabeledExample> examples;
  std::vector<Vec> planted_path;
  std::vector<Vec> pre_comparators;  // empty when comparators are computed in-loop
  bool comp_precomputed = false;
  double stream_sup_m = 0.0;
};

RepInput build_rep_input(const ExperimentConfig &cfg, const BoxSet &box, std::int64_t rep) {
  RepInput in;
  const auto T = static_cast<std::size_t>(cfg.horizon);
  if (cfg.stream.synthetic) {
    GeneratedStream gs =
        generate_stream(cfg.stream.spec, cfg.seed + static_cast<std::uint64_t>(rep), cfg.horizon);
    in.examples = std::move(gs.examples);
    in.planted_path = std::move(gs.planted_path);
  } else {
    in.examples = ingest_dataset(cfg.stream.path, cfg.stream.format, cfg.stream.declared_dim);
    if (in.examples.size() < T)
      throw ConfigError("config: dataset holds " + std::to_string(in.examples.size()) +
                        " examples, horizon needs " + std::to_string(T));
    in.examples.resize(T);
    for (const auto &ex : in.examples)
      if (ex.features.size() != box.dim())
        throw ConfigError("config: dataset feature width does not match the box dimension");
  }
  in.stream_sup_m =
      stream_subgradient_bound(cfg.loss_spec(), in.examples, cfg.horizon, box, cfg.rho);

  const auto &comp = cfg.comparator;
  switch (comp.mode) {
    case ComparatorMode::fixed:
      in.pre_comparators.assign(T, comp.fixed_point);
      in.comp_precomputed = true;
      break;
    case ComparatorMode::planted:
      for (const auto &p : in.planted_path)
        if (!box.contains(p))
          throw ConfigError("config: planted path leaves the box; shrink path_amplitude");
      in.pre_comparators = in.planted_path;
      in.comp_precomputed = true;
      break;
    case ComparatorMode::user_supplied:
      in.pre_comparators.assign(comp.supplied.begin(), comp.supplied.begin() + T);
      in.comp_precomputed = true;
      break;
    case ComparatorMode::per_round_minimizer:
      if (!cfg.adaptive_weights) {
        GridSpec grid{comp.resolution, 3};
        std::vector<CompositeLoss> rounds;
        rounds.reserve(T);
        const WeightedL1 r = WeightedL1::uniform(cfg.rho, box.dim());
        for (std::size_t t = 0; t < T; ++t)
          rounds.push_back(CompositeLoss{cfg.loss_spec(), in.examples[t], r});
        in.pre_comparators = comparator_from_minimizers(rounds, box, grid);
        in.comp_precomputed = true;
      }
      break;
  }
  return in;
}

struct CoreRunResult {
  RegretLedger ledger;
  double m_realized = 0.0;
};

CoreRunResult core_run(const ExperimentConfig &cfg, const BoxSet &box, const RepInput &input,
                       OnlineLearner &learner) {
  const LossSpec loss = cfg.loss_spec();
  const WeightRule rule{cfg.tau, cfg.eps_w};
  const GridSpec grid{cfg.comparator.resolution, 3};
  CoreRunResult out;
  Vec prev_action = cfg.start_point();
  Vec ones(box.dim(), 1.0);
  for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
    // Round protocol: weights from the previous action, example revealed, losses
    // evaluated at the played point, step, ledger append.
    WeightedL1 r{cfg.rho,
                 cfg.adaptive_weights ? update_weights(prev_action, rule) : ones};
    const LabeledExample &ex = input.examples[static_cast<std::size_t>(t - 1)];
    const Vec x_t = learner.propose(t);
    const LossEvaluation f_eval = loss.eval(x_t, ex);
    const LossEvaluation r_eval = reg_eval_subgrad(r, x_t);

    Vec u_t;
    if (input.comp_precomputed) {
      u_t = input.pre_comparators[static_cast<std::size_t>(t - 1)];
    } else {
      u_t = brute_minimize(CompositeLoss{loss, ex, r}, box, grid).argmin;
    }
    const double loss_u = loss.eval(u_t, ex).value + reg_eval_subgrad(r, u_t).value;

    LedgerRecord rec;
    rec.t = t;
    rec.x = x_t;
    rec.u = std::move(u_t);
    rec.eta = learner.step_scalar(t);
    rec.loss_x = f_eval.value + r_eval.value;
    rec.loss_u = loss_u;
    rec.grad_f = f_eval.subgradient;
    rec.grad_r = r_eval.subgradient;
    out.m_realized = std::max(out.m_realized, norm(add(rec.grad_f, rec.grad_r)));
    out.ledger.append(std::move(rec));

    learner.observe(f_eval, r, t);
    prev_action = x_t;
  }
  out.ledger.set_final_iterate(learner.propose(cfg.horizon + 1));
  return out;
}

std::vector<Vec> comparator_points(const RegretLedger &ledger) {
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(ledger.rounds()));
  for (const auto &rec : ledger.records()) pts.push_back(rec.u);
  return pts;
}

struct RepOutcome {
  RepStats stats;
  RegretLedger ledger;
};

RepOutcome run_rep(const ExperimentConfig &cfg, const BoxSet &box, const AlgoConfig &acfg,
                   std::int64_t rep) {
  const RepInput input = build_rep_input(cfg, box, rep);
  const Vec x1 = cfg.start_point();
  const double mu = cfg.mu();
  const double big_r = box.diameter();

  RepOutcome out;
  RepStats &st = out.stats;

  auto make_learner = [&]() -> std::unique_ptr<OnlineLearner> {
    switch (acfg.algo) {
      case Algo::SAGE: return make_sage(x1, box, acfg.l0, mu);
      case Algo::ACSA: return make_acsa(x1, box, acfg.g0, mu);
      case Algo::RDA: return make_rda(x1, box, acfg.b0);
      case Algo::OPG: break;
    }
    return nullptr;
  };

  CoreRunResult core;
  if (acfg.algo != Algo::OPG) {
    auto learner = make_learner();
    core = core_run(cfg, box, input, *learner);
  } else {
    const ScheduleConfig &sc = acfg.schedule;
    const bool theorem_kind =
        sc.kind == ScheduleKind::theorem1 || sc.kind == ScheduleKind::theorem2;
    const double m_sched = sc.m_supplied ? sc.big_m : input.stream_sup_m;
    double q = sc.u1_x1_sq;
    if (sc.u1_x1_true) q = dist_sq(input.pre_comparators.front(), x1);

    double d_sched = sc.d_beta;
    if (sc.d_beta_mode == DBetaMode::precompute)
      d_sched = path_variation(input.pre_comparators, cfg.beta);
    else if (sc.d_beta_mode == DBetaMode::doubling)
      d_sched = big_r;

    auto build_schedule = [&](double d_val) {
      switch (sc.kind) {
        case ScheduleKind::theorem1:
          return sc.sigma_supplied
                     ? StepSchedule::theorem1_with_sigma(sc.gamma, sc.sigma, cfg.horizon)
                     : StepSchedule::theorem1(sc.gamma, cfg.beta, big_r, m_sched, cfg.horizon,
                                              d_val);
        case ScheduleKind::theorem2:
          return sc.gamma_supplied
                     ? StepSchedule::theorem2_with_gamma(sc.gamma, sc.delta, mu, cfg.horizon)
                     : StepSchedule::theorem2(sc.delta, mu, big_r, cfg.horizon, cfg.beta, d_val,
                                              q);
        case ScheduleKind::inverse_t: return StepSchedule::inverse_t(sc.scale, cfg.horizon);
        case ScheduleKind::constant: return StepSchedule::constant(sc.scale, cfg.horizon);
      }
      throw ConfigError("unreachable schedule kind");
    };

    for (;;) {
      auto learner = make_opg(x1, box, build_schedule(d_sched));
      core = core_run(cfg, box, input, *learner);
      if (!theorem_kind || sc.d_beta_mode != DBetaMode::doubling) break;
      const double realized = path_variation(comparator_points(core.ledger), cfg.beta);
      if (realized <= d_sched) break;
      if (st.doubling_restarts >= 64)
        throw ConfigError("doubling estimate failed to settle after 64 restarts");
      d_sched *= 2.0;
      st.doubling_restarts += 1;
    }

    st.m_schedule = theorem_kind ? m_sched : 0.0;
    st.d_beta_schedule = theorem_kind ? d_sched : 0.0;
    st.u1_x1_sq = q;

    const auto slacks = lemma1_slacks(core.ledger, mu);
    st.lemma1_violations = 0;
    st.lemma1_min_slack = std::numeric_limits<double>::infinity();
    for (double s : slacks) {
      if (s < -kLemma1Tol) st.lemma1_violations += 1;
      st.lemma1_min_slack = std::min(st.lemma1_min_slack, s);
    }
    const AuditResult tel = telescope_audit(core.ledger, big_r);
    st.telescope_pass = tel.pass ? 1 : 0;
    st.telescope_slack = tel.slack;
  }

  st.m_realized = core.m_realized;
  st.m_stream_sup = input.stream_sup_m;
  st.d_beta_realized = path_variation(comparator_points(core.ledger), cfg.beta);
  if (acfg.algo == Algo::OPG) {
    const ScheduleConfig &sc = acfg.schedule;
    if (sc.kind == ScheduleKind::theorem1)
      st.bound = theorem1_bound(big_r, st.m_schedule, cfg.horizon, cfg.beta, sc.gamma,
                                st.d_beta_schedule);
    else if (sc.kind == ScheduleKind::theorem2)
      st.bound =
          theorem2_bound(big_r, st.m_realized, cfg.horizon, cfg.beta, sc.delta, st.d_beta_realized);
    // Report q as the schedule consumed it; otherwise report the realized value.
    const bool q_used = sc.kind == ScheduleKind::theorem2 && !sc.gamma_supplied;
    if (!q_used) st.u1_x1_sq = dist_sq(core.ledger.records().front().u, x1);
  }

  const auto cps = checkpoint_grid(cfg.horizon);
  st.regret.reserve(cps.size());
  for (auto cp : cps) st.regret.push_back(dynamic_regret(core.ledger, cp));
  out.ledger = std::move(core.ledger);
  return out;
}

}  // namespace

ExperimentArtifacts run_experiment(const ExperimentConfig &config) {
  config.validate();
  const BoxSet box = config.box();
  ExperimentArtifacts artifacts;
  artifacts.config = config;

  const auto reps = static_cast<std::size_t>(config.repetitions);
  unsigned thread_count = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                             : std::thread::hardware_concurrency();
  thread_count = std::max(1u, std::min<unsigned>(thread_count, reps));

  double max_stream_sup = 0.0;
  for (const auto &acfg : config.algos) {
    AlgoResult result;
    result.config = acfg;
    result.checkpoints = checkpoint_grid(config.horizon);
    result.reps.resize(reps);
    std::vector<RegretLedger> ledgers(1);

    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto worker = [&]() {
      for (;;) {
        const std::size_t rep = next.fetch_add(1);
        if (rep >= reps) return;
        try {
          RepOutcome outcome = run_rep(config, box, acfg, static_cast<std::int64_t>(rep));
          result.reps[rep] = std::move(outcome.stats);
          if (rep == 0) ledgers[0] = std::move(outcome.ledger);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    if (thread_count == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < thread_count; ++i) pool.emplace_back(worker);
      for (auto &th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    result.first_rep_ledger = std::move(ledgers[0]);

    // Aggregate in repetition order so the output is independent of scheduling.
    const std::size_t n_cp = result.checkpoints.size();
    result.mean_avg_regret.assign(n_cp, 0.0);
    result.std_avg_regret.assign(n_cp, 0.0);
    for (std::size_t c = 0; c < n_cp; ++c) {
      double mean = 0.0, m2 = 0.0;
      std::size_t count = 0;
      const double horizon_c = static_cast<double>(result.checkpoints[c]);
      for (std::size_t rep = 0; rep < reps; ++rep) {
        const double v = result.reps[rep].regret[c] / horizon_c;
        count += 1;
        const double delta = v - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (v - mean);
      }
      result.mean_avg_regret[c] = mean;
      result.std_avg_regret[c] = count > 1 ? std::sqrt(m2 / static_cast<double>(count - 1)) : 0.0;
    }
    if (!std::isnan(result.reps[0].bound)) {
      double sum = 0.0;
      for (const auto &rs : result.reps) sum += rs.bound;
      result.mean_bound = sum / static_cast<double>(reps);
    }
    for (const auto &rs : result.reps) {
      if (rs.lemma1_violations > 0 || rs.telescope_pass == 0) artifacts.audits_pass = false;
      max_stream_sup = std::max(max_stream_sup, rs.m_stream_sup);
    }
    artifacts.algos.push_back(std::move(result));
  }

  if (config.comparator.mode == ComparatorMode::per_round_minimizer) {
    // Each grid comparator is optimal up to (Lipschitz bound) * resolution * sqrt(n) per round.
    artifacts.comparator_error_bound = max_stream_sup * config.comparator.resolution *
                                       std::sqrt(static_cast<double>(box.dim())) *
                                       static_cast<double>(config.horizon);
  }
  return artifacts;
}

// ---------- emission ----------

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

ordered_json config_echo(const ExperimentConfig &cfg) {
  ordered_json j;
  j["objective"] = to_string(cfg.objective);
  j["horizon"] = cfg.horizon;
  j["repetitions"] = cfg.repetitions;
  j["seed"] = cfg.seed;
  j["beta"] = cfg.beta;
  j["box"] = {{"lower", cfg.box_lower}, {"upper", cfg.box_upper}};
  j["x1"] = cfg.start_point();
  j["loss"] = {{"kind", to_string(cfg.loss_kind)}, {"alpha", cfg.alpha}, {"eps", cfg.eps}};
  j["regularizer"] = {{"rho", cfg.rho},
                      {"tau", cfg.tau},
                      {"eps_w", cfg.eps_w},
                      {"weight_mode", cfg.adaptive_weights ? "adaptive" : "fixed"}};
  j["lambda"] = cfg.lambda;
  if (cfg.stream.synthetic) {
    const auto &s = cfg.stream.spec;
    j["stream"] = {{"source", "synthetic"},
                   {"dimension", s.dimension},
                   {"drift", to_string(s.drift)},
                   {"drift_magnitude", s.drift_magnitude},
                   {"drift_decay", s.drift_decay},
                   {"noise_rate", s.noise_rate},
                   {"feature_scale", s.feature_scale},
                   {"path_amplitude", s.path_amplitude}};
  } else {
    j["stream"] = {{"source", "file"},
                   {"path", cfg.stream.path},
                   {"format", cfg.stream.format == IngestFormat::csv ? "csv" : "svmlight"},
                   {"dimension", cfg.stream.declared_dim}};
  }
  j["comparator"] = {{"mode", to_string(cfg.comparator.mode)},
                     {"resolution", cfg.comparator.resolution}};
  ordered_json algos = ordered_json::object();
  for (const auto &a : cfg.algos) {
    ordered_json e = ordered_json::object();
    if (a.algo == Algo::OPG) {
      ordered_json s;
      s["kind"] = to_string(a.schedule.kind);
      switch (a.schedule.kind) {
        case ScheduleKind::theorem1:
          s["gamma"] = a.schedule.gamma;
          if (a.schedule.sigma_supplied) s["sigma"] = a.schedule.sigma;
          break;
        case ScheduleKind::theorem2:
          s["delta"] = a.schedule.delta;
          if (a.schedule.gamma_supplied) s["gamma"] = a.schedule.gamma;
          break;
        default: s["scale"] = a.schedule.scale; break;
      }
      switch (a.schedule.d_beta_mode) {
        case DBetaMode::supplied: s["d_beta"] = a.schedule.d_beta; break;
        case DBetaMode::precompute: s["d_beta"] = "precompute"; break;
        case DBetaMode::doubling: s["d_beta"] = "doubling"; break;
      }
      e["schedule"] = s;
    } else if (a.algo == Algo::SAGE) {
      e["l0"] = a.l0;
    } else if (a.algo == Algo::ACSA) {
      e["g0"] = a.g0;
    } else {
      e["b0"] = a.b0;
    }
    algos[to_string(a.algo)] = e;
  }
  j["algorithms"] = algos;
  return j;
}

}  // namespace

void emit_results(const ExperimentArtifacts &artifacts, const std::string &out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("emit_results: cannot create " + out_dir + ": " + ec.message());

  const fs::path dir(out_dir);
  {
    std::ofstream csv(dir / "regret_curve.csv");
    if (!csv) throw IoError("emit_results: cannot write regret_curve.csv");
    csv << "algorithm,T_checkpoint,mean_avg_regret,std_avg_regret,bound_value\n";
    for (const auto &res : artifacts.algos) {
      for (std::size_t c = 0; c < res.checkpoints.size(); ++c) {
        const bool last = c + 1 == res.checkpoints.size();
        csv << to_string(res.config.algo) << ',' << res.checkpoints[c] << ','
            << fmt17(res.mean_avg_regret[c]) << ',' << fmt17(res.std_avg_regret[c]) << ',';
        if (last && !std::isnan(res.mean_bound)) csv << fmt17(res.mean_bound);
        csv << '\n';
      }
    }
    if (!csv) throw IoError("emit_results: write failed for regret_curve.csv");
  }

  for (const auto &res : artifacts.algos) {
    const std::string name = to_string(res.config.algo) + "_ledger.csv";
    export_ledger_csv(res.first_rep_ledger, artifacts.config.mu(), (dir / name).string());
  }

  ordered_json j;
  j["config"] = config_echo(artifacts.config);
  j["audits_pass"] = artifacts.audits_pass;
  j["comparator_induced_error_bound"] = artifacts.comparator_error_bound;
  ordered_json algs = ordered_json::object();
  for (const auto &res : artifacts.algos) {
    ordered_json a;
    a["checkpoints"] = res.checkpoints;
    a["mean_avg_regret"] = res.mean_avg_regret;
    a["std_avg_regret"] = res.std_avg_regret;
    if (std::isnan(res.mean_bound))
      a["bound_mean"] = nullptr;
    else
      a["bound_mean"] = res.mean_bound;

    double d_beta_sum = 0.0, m_real_max = 0.0;
    int lemma1_total = 0, doubling_max = 0;
    double lemma1_min = std::numeric_limits<double>::infinity();
    double telescope_min = std::numeric_limits<double>::infinity();
    bool telescope_all = true, audited = false;
    for (const auto &rs : res.reps) {
      d_beta_sum += rs.d_beta_realized;
      m_real_max = std::max(m_real_max, rs.m_realized);
      doubling_max = std::max(doubling_max, rs.doubling_restarts);
      if (rs.lemma1_violations >= 0) {
        audited = true;
        lemma1_total += rs.lemma1_violations;
        lemma1_min = std::min(lemma1_min, rs.lemma1_min_slack);
        telescope_all = telescope_all && rs.telescope_pass == 1;
        telescope_min = std::min(telescope_min, rs.telescope_slack);
      }
    }
    a["d_beta_realized_mean"] = d_beta_sum / static_cast<double>(res.reps.size());
    a["m_realized_max"] = m_real_max;
    a["m_schedule"] = res.reps[0].m_schedule;
    a["u1_x1_sq"] = res.reps[0].u1_x1_sq;
    if (audited) {
      a["lemma1_violations_total"] = lemma1_total;
      a["lemma1_min_slack"] = lemma1_min;
      a["telescope_all_pass"] = telescope_all;
      a["telescope_min_slack"] = telescope_min;
      a["doubling_restarts_max"] = doubling_max;
    }
    algs[to_string(res.config.algo)] = a;
  }
  j["algorithms"] = algs;

  std::ofstream js(dir / "summary.json");
  if (!js) throw IoError("emit_results: cannot write summary.json");
  js << j.dump(2) << '\n';
  if (!js) throw IoError("emit_results: write failed for summary.json");
}

}  // namespace opg
