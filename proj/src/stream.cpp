#include "opg/stream.hpp"

#include "opg/errors.hpp"
#include "opg/rng.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace opg {

DriftModel drift_model_from_string(const std::string &name) {
  if (name == "stationary") return DriftModel::stationary;
  if (name == "switching") return DriftModel::switching;
  if (name == "smooth_drift") return DriftModel::smooth_drift;
  throw ConfigError("unknown drift model: " + name);
}

std::string to_string(DriftModel model) {
  switch (model) {
    case DriftModel::stationary: return "stationary";
    case DriftModel::switching: return "switching";
    case DriftModel::smooth_drift: return "smooth_drift";
  }
  return "?";
}

void SyntheticStreamSpec::validate() const {
  if (dimension < 1) throw ConfigError("stream: dimension must be at least 1");
  if (drift_magnitude < 0.0) throw ConfigError("stream: drift magnitude must be nonnegative");
  if (drift_decay < 0.0 || drift_decay > 1.0)
    throw ConfigError("stream: drift decay must lie in [0, 1]");
  if (noise_rate < 0.0 || noise_rate >= 0.5)
    throw ConfigError("stream: noise rate must lie in [0, 0.5)");
  if (!(feature_scale > 0.0)) throw ConfigError("stream: feature scale must be positive");
  if (!(path_amplitude > 0.0)) throw ConfigError("stream: path amplitude must be positive");
  if (family == StreamFamily::regression && noise_rate != 0.0)
    throw ConfigError("stream: regression families take no label noise (set noise_rate to 0)");
  if (drift == DriftModel::smooth_drift && drift_magnitude > path_amplitude)
    throw ConfigError("stream: smooth drift step must not exceed the path amplitude");
}

GeneratedStream generate_stream(const SyntheticStreamSpec &spec, std::uint64_t seed,
                                std::int64_t horizon) {
  spec.validate();
  if (horizon < 1) throw ConfigError("generate_stream: horizon must be at least 1");
  Rng rng(seed);
  const std::size_t n = spec.dimension;
  const double amp = spec.path_amplitude;

  GeneratedStream out;
  out.planted_path.reserve(static_cast<std::size_t>(horizon));
  Vec p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = rng.uniform(-amp, amp);
  out.planted_path.push_back(p);
  for (std::int64_t t = 2; t <= horizon; ++t) {
    switch (spec.drift) {
      case DriftModel::stationary:
        break;
      case DriftModel::switching:
        if (t == horizon / 2 + 1)
          for (std::size_t i = 0; i < n; ++i) p[i] = rng.uniform(-amp, amp);
        break;
      case DriftModel::smooth_drift: {
        // Move exactly one coordinate by the scheduled magnitude, stepping away from
        // whichever wall would be crossed, so consecutive path distances are exact.
        const double step =
            spec.drift_magnitude * std::pow(static_cast<double>(t - 1), -spec.drift_decay);
        const std::size_t i = n == 1 ? 0 : static_cast<std::size_t>(rng.below(n));
        double dir = rng.bernoulli(0.5) ? 1.0 : -1.0;
        if (p[i] + dir * step > amp || p[i] + dir * step < -amp) dir = -dir;
        p[i] += dir * step;
        break;
      }
    }
    out.planted_path.push_back(p);
  }
  for (std::size_t t = 1; t < out.planted_path.size(); ++t)
    out.planted_d0 += dist(out.planted_path[t], out.planted_path[t - 1]);

  out.examples.reserve(static_cast<std::size_t>(horizon));
  for (std::int64_t t = 0; t < horizon; ++t) {
    const Vec &target = out.planted_path[static_cast<std::size_t>(t)];
    LabeledExample ex;
    ex.features.assign(n, 0.0);
    if (spec.family == StreamFamily::classification) {
      double margin = 0.0;
      do {
        for (std::size_t i = 0; i < n; ++i)
          ex.features[i] = rng.uniform(-spec.feature_scale, spec.feature_scale);
        margin = dot(target, ex.features);
      } while (std::abs(margin) < 1e-12);
      ex.label = margin > 0.0 ? 1.0 : -1.0;
      if (spec.noise_rate > 0.0 && rng.bernoulli(spec.noise_rate)) ex.label = -ex.label;
    } else {
      const std::size_t i =
          n == 1 ? 0 : static_cast<std::size_t>(t) % n;  // cycle coordinates deterministically
      ex.features[i] = rng.bernoulli(0.5) ? spec.feature_scale : -spec.feature_scale;
      ex.label = ex.features[i] * target[i];
    }
    out.examples.push_back(std::move(ex));
  }
  return out;
}

IngestFormat ingest_format_from_string(const std::string &name) {
  if (name == "csv") return IngestFormat::csv;
  if (name == "svmlight") return IngestFormat::svmlight;
  throw ConfigError("unknown dataset format: " + name);
}

namespace {

[[noreturn]] void ingest_fail(const std::string &path, std::size_t line_no,
                              const std::string &what) {
  throw IoError(path + ": line " + std::to_string(line_no) + ": " + what);
}

double parse_label(const std::string &path, std::size_t line_no, const std::string &tok) {
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception &) {
    ingest_fail(path, line_no, "bad label '" + tok + "'");
  }
  if (used != tok.size() || (v != 1.0 && v != -1.0))
    ingest_fail(path, line_no, "bad label '" + tok + "' (labels must be +1 or -1)");
  return v;
}

double parse_value(const std::string &path, std::size_t line_no, const std::string &tok,
                   const char *what) {
  double v = 0.0;
  std::size_t used = 0;
  try {
    v = std::stod(tok, &used);
  } catch (const std::exception &) {
    ingest_fail(path, line_no, std::string("bad ") + what + " '" + tok + "'");
  }
  if (used != tok.size() || !std::isfinite(v))
    ingest_fail(path, line_no, std::string("bad ") + what + " '" + tok + "'");
  return v;
}

}  // namespace

std::vector<LabeledExample> ingest_dataset(const std::string &path, IngestFormat format,
                                           std::size_t declared_dim) {
  if (format == IngestFormat::svmlight && declared_dim == 0)
    throw ConfigError("ingest_dataset: svmlight needs a declared dimension to densify into");
  std::ifstream in(path);
  if (!in) throw IoError("ingest_dataset: cannot open " + path);

  std::vector<LabeledExample> out;
  std::string line;
  std::size_t line_no = 0;
  std::size_t width = declared_dim;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    LabeledExample ex;
    if (format == IngestFormat::csv) {
      std::vector<std::string> fields;
      std::stringstream ss(line);
      std::string tok;
      while (std::getline(ss, tok, ',')) fields.push_back(tok);
      if (fields.size() < 2) ingest_fail(path, line_no, "expected a label and features");
      ex.label = parse_label(path, line_no, fields[0]);
      if (width == 0) width = fields.size() - 1;  // inferred from the first data row
      if (fields.size() - 1 != width)
        ingest_fail(path, line_no, "ragged row: expected " + std::to_string(width) +
                                       " features, got " + std::to_string(fields.size() - 1));
      ex.features.reserve(width);
      for (std::size_t i = 1; i < fields.size(); ++i)
        ex.features.push_back(parse_value(path, line_no, fields[i], "feature"));
    } else {
      std::stringstream ss(line);
      std::string tok;
      if (!(ss >> tok)) ingest_fail(path, line_no, "missing label");
      ex.label = parse_label(path, line_no, tok);
      ex.features.assign(width, 0.0);
      std::vector<bool> seen(width, false);
      while (ss >> tok) {
        const auto colon = tok.find(':');
        if (colon == std::string::npos || colon == 0 || colon + 1 >= tok.size())
          ingest_fail(path, line_no, "malformed feature entry '" + tok + "'");
        const double idx_val = parse_value(path, line_no, tok.substr(0, colon), "feature index");
        if (idx_val < 1.0 || idx_val > static_cast<double>(width) ||
            idx_val != std::floor(idx_val))
          ingest_fail(path, line_no, "feature index " + tok.substr(0, colon) +
                                         " out of declared range [1, " + std::to_string(width) +
                                         "]");
        const auto idx = static_cast<std::size_t>(idx_val) - 1;
        if (seen[idx])
          ingest_fail(path, line_no, "duplicate feature index " + tok.substr(0, colon));
        seen[idx] = true;
        ex.features[idx] = parse_value(path, line_no, tok.substr(colon + 1), "feature value");
      }
    }
    out.push_back(std::move(ex));
  }
  if (out.empty()) throw IoError("ingest_dataset: " + path + " holds no examples");
  return out;
}

}  // namespace opg
