#include "opg/errors.hpp"
#include "opg/experiment.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace opg;

namespace {

std::string slurp(const std::filesystem::path &p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

constexpr const char *kMinimalConfig = R"({
  "objective": "F1",
  "horizon": 8,
  "repetitions": 2,
  "seed": 3,
  "box": {"dimension": 1, "low": -1.0, "high": 1.0},
  "loss": {"kind": "hinge"},
  "stream": {"source": "synthetic", "drift": "stationary", "feature_scale": 2.0},
  "comparator": {"mode": "fixed", "point": [0.25]},
  "algorithms": {
    "OPG": {"schedule": {"kind": "inverse_t", "scale": 0.1}},
    "RDA": {"b0": 1.0}
  }
})";

}  // namespace

TEST_CASE("config parsing fills documented defaults") {
  const auto cfg = parse_config_json(kMinimalConfig);
  CHECK(cfg.objective == Objective::F1);
  CHECK(cfg.horizon == 8);
  CHECK(cfg.repetitions == 2);
  CHECK(cfg.seed == 3);
  CHECK(cfg.beta == 0.0);
  CHECK(cfg.rho == doctest::Approx(0.4));
  CHECK(cfg.tau == doctest::Approx(1.0));
  CHECK(cfg.eps_w == doctest::Approx(0.1));
  CHECK(cfg.adaptive_weights);
  CHECK(cfg.threads == 0);
  CHECK(cfg.mu() == 0.0);
  CHECK(cfg.loss_spec().lambda == 0.0);
  CHECK(cfg.start_point() == Vec{0.0});
  CHECK(cfg.box().diameter() == doctest::Approx(2.0));
  REQUIRE(cfg.algos.size() == 2);
  CHECK(cfg.algos[0].algo == Algo::OPG);
  CHECK(cfg.algos[1].algo == Algo::RDA);
}

TEST_CASE("config parsing rejects malformed input") {
  auto patched = [](const std::string &from, const std::string &to) {
    std::string s = kMinimalConfig;
    const auto pos = s.find(from);
    REQUIRE(pos != std::string::npos);
    s.replace(pos, from.size(), to);
    return s;
  };
  CHECK_THROWS_AS(parse_config_json("{"), ConfigError);
  CHECK_THROWS_AS(parse_config_json("[1, 2]"), ConfigError);
  CHECK_THROWS_AS(parse_config_json(patched("\"objective\"", "\"objektive\"")), ConfigError);
  CHECK_THROWS_AS(parse_config_json(patched("\"F1\"", "\"F3\"")), ConfigError);
  CHECK_THROWS_AS(parse_config_json(patched("\"box\"", "\"bocks\"")), ConfigError);
  CHECK_THROWS_AS(parse_config_json(patched("\"dimension\"", "\"dims\"")), ConfigError);
  CHECK_THROWS_AS(parse_config_json(patched("\"algorithms\"", "\"solvers\"")), ConfigError);
  CHECK_THROWS_AS(parse_config_json(patched("\"OPG\"", "\"OGD\"")), ConfigError);
  CHECK_THROWS_AS(parse_config_json(patched("\"synthetic\"", "\"synth\"")), ConfigError);
  CHECK_THROWS_AS(parse_config_json(patched("\"stationary\"", "\"static\"")), ConfigError);
  CHECK_THROWS_AS(parse_config_json(patched("[0.25]", "[7.0]")), ConfigError);
}

TEST_CASE("weight mode and objective switches") {
  std::string s = kMinimalConfig;
  s.replace(s.find("\"loss\""), 6, "\"regularizer\": {\"weight_mode\": \"fixed\"}, \"loss\"");
  const auto cfg = parse_config_json(s);
  CHECK_FALSE(cfg.adaptive_weights);

  std::string bad = s;
  bad.replace(bad.find("\"fixed\""), 7, "\"frozen\"");
  CHECK_THROWS_AS(parse_config_json(bad), ConfigError);

  std::string f2 = kMinimalConfig;
  f2.replace(f2.find("\"F1\""), 4, "\"F2\"");
  const auto cfg2 = parse_config_json(f2);
  CHECK(cfg2.mu() == doctest::Approx(1.0));
  CHECK(cfg2.loss_spec().lambda == doctest::Approx(1.0));

  std::string f2_no_lambda = f2;
  f2_no_lambda.replace(f2_no_lambda.find("\"horizon\": 8"), 12, "\"horizon\": 8, \"lambda\": 0.0");
  CHECK_THROWS_AS(parse_config_json(f2_no_lambda), ConfigError);
}

TEST_CASE("validation rejects inconsistent setups") {
  auto base = parse_config_json(kMinimalConfig);

  auto cfg = base;
  cfg.box_lower = Vec(4, -1.0);
  cfg.box_upper = Vec(4, 1.0);
  cfg.stream.spec.dimension = 4;
  cfg.comparator.mode = ComparatorMode::per_round_minimizer;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = base;
  cfg.algos.push_back(cfg.algos[0]);
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = base;
  cfg.x1 = {2.0};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = base;
  cfg.stream.spec.dimension = 2;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  // theorem schedules must know the comparator up front; adaptive weights make
  // per-round minimizers depend on the run itself
  cfg = base;
  cfg.comparator.mode = ComparatorMode::per_round_minimizer;
  cfg.adaptive_weights = true;
  cfg.algos[0].schedule.kind = ScheduleKind::theorem1;
  cfg.algos[0].schedule.d_beta_mode = DBetaMode::precompute;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.adaptive_weights = false;
  CHECK_NOTHROW(cfg.validate());

  cfg = base;
  cfg.algos[0].schedule.kind = ScheduleKind::theorem2;
  cfg.algos[0].schedule.gamma_supplied = true;
  cfg.algos[0].schedule.gamma = 1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // theorem2 needs F2

  cfg = base;
  cfg.comparator.mode = ComparatorMode::user_supplied;
  cfg.comparator.supplied = {{0.0}};
  CHECK_THROWS_AS(cfg.validate(), ConfigError);  // shorter than the horizon
}

TEST_CASE("checkpoint grid doubles and always ends at the horizon") {
  CHECK(checkpoint_grid(50) == std::vector<std::int64_t>{1, 2, 4, 8, 16, 32, 50});
  CHECK(checkpoint_grid(64) == std::vector<std::int64_t>{1, 2, 4, 8, 16, 32, 64});
  CHECK(checkpoint_grid(1) == std::vector<std::int64_t>{1});
}

TEST_CASE("stream subgradient bound adds slope, ridge, and regularizer parts") {
  const BoxSet box = BoxSet::uniform(2, -1.0, 1.0);
  const std::vector<LabeledExample> exs{{1.0, {3.0, 4.0}}, {-1.0, {0.0, 1.0}}};
  LossSpec hinge_spec;
  CHECK(stream_subgradient_bound(hinge_spec, exs, 2, box, 0.4) ==
        doctest::Approx(5.0 + 0.4 * std::sqrt(2.0)));
  // only the first example counts when the horizon stops there
  CHECK(stream_subgradient_bound(hinge_spec, exs, 1, box, 0.0) == doctest::Approx(5.0));
  LossSpec ridge_spec;
  ridge_spec.lambda = 1.0;
  CHECK(stream_subgradient_bound(ridge_spec, exs, 2, box, 0.4) ==
        doctest::Approx(5.0 + std::sqrt(2.0) + 0.4 * std::sqrt(2.0)));
  LossSpec ghinge_spec;
  ghinge_spec.kind = LossKind::generalized_hinge;
  ghinge_spec.alpha = 2.0;
  CHECK(stream_subgradient_bound(ghinge_spec, exs, 2, box, 0.0) == doctest::Approx(10.0));
}

TEST_CASE("one-round run against the start point has zero regret") {
  auto cfg = parse_config_json(kMinimalConfig);
  cfg.horizon = 1;
  cfg.repetitions = 1;
  cfg.comparator.fixed_point = {0.0};  // == start_point()
  const auto art = run_experiment(cfg);
  REQUIRE(art.algos.size() == 2);
  for (const auto &algo : art.algos) {
    REQUIRE(algo.checkpoints == std::vector<std::int64_t>{1});
    CHECK(algo.mean_avg_regret[0] == doctest::Approx(0.0));
    CHECK(algo.std_avg_regret[0] == 0.0);
  }
  CHECK(art.audits_pass);
}

TEST_CASE("experiment artifacts carry recomputable statistics") {
  auto cfg = parse_config_json(kMinimalConfig);
  cfg.repetitions = 5;
  const auto art = run_experiment(cfg);
  REQUIRE(art.algos.size() == 2);
  for (const auto &algo : art.algos) {
    REQUIRE(algo.checkpoints == std::vector<std::int64_t>{1, 2, 4, 8});
    REQUIRE(algo.reps.size() == 5);
    for (std::size_t k = 0; k < algo.checkpoints.size(); ++k) {
      const double T = static_cast<double>(algo.checkpoints[k]);
      double mean = 0.0;
      for (const auto &rep : algo.reps) mean += rep.regret[k] / T;
      mean /= 5.0;
      double var = 0.0;
      for (const auto &rep : algo.reps) {
        const double d = rep.regret[k] / T - mean;
        var += d * d;
      }
      const double sd = std::sqrt(var / 4.0);
      CHECK(algo.mean_avg_regret[k] == doctest::Approx(mean).epsilon(1e-12));
      CHECK(algo.std_avg_regret[k] == doctest::Approx(sd).epsilon(1e-12));
    }
  }
  // the proximal algorithm is audited on every repetition
  for (const auto &rep : art.algos[0].reps) {
    CHECK(rep.lemma1_violations == 0);
    CHECK(rep.telescope_pass == 1);
    CHECK(rep.m_stream_sup > 0.0);
  }
  // the dual-averaging baseline is not
  CHECK(art.algos[1].reps[0].lemma1_violations == -1);
}

TEST_CASE("emitted results are byte-reproducible and dimensioned as documented") {
  auto cfg = parse_config_json(kMinimalConfig);
  const auto art = run_experiment(cfg);
  const auto root = std::filesystem::temp_directory_path();
  const auto dir_a = root / "opg_emit_a";
  const auto dir_b = root / "opg_emit_b";
  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
  emit_results(art, dir_a.string());
  emit_results(run_experiment(cfg), dir_b.string());

  for (const char *name : {"regret_curve.csv", "summary.json", "OPG_ledger.csv", "RDA_ledger.csv"}) {
    CAPTURE(name);
    const auto a = slurp(dir_a / name);
    CHECK(a == slurp(dir_b / name));
    CHECK_FALSE(a.empty());
  }

  // two algorithms at four checkpoints: eight data rows after the header
  std::istringstream curve(slurp(dir_a / "regret_curve.csv"));
  std::string line;
  std::getline(curve, line);
  CHECK(line == "algorithm,T_checkpoint,mean_avg_regret,std_avg_regret,bound_value");
  std::size_t rows = 0;
  while (std::getline(curve, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 8);

  // ledgers hold one row per round of the first repetition
  std::istringstream ledger(slurp(dir_a / "OPG_ledger.csv"));
  std::getline(ledger, line);
  rows = 0;
  while (std::getline(ledger, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 8);

  std::filesystem::remove_all(dir_a);
  std::filesystem::remove_all(dir_b);
}

TEST_CASE("file streams shorter than the horizon are refused at run time") {
  const auto data = std::filesystem::temp_directory_path() / "opg_short.csv";
  {
    std::ofstream out(data);
    out << "1,0.5\n-1,0.25\n";
  }
  auto cfg = parse_config_json(kMinimalConfig);
  cfg.stream.synthetic = false;
  cfg.stream.path = data.string();
  cfg.stream.format = IngestFormat::csv;
  cfg.horizon = 5;
  cfg.validate();
  CHECK_THROWS_AS(run_experiment(cfg), ConfigError);
  cfg.horizon = 2;
  CHECK_NOTHROW(run_experiment(cfg));
  std::filesystem::remove(data);
}
