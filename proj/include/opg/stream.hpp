#pragma once

#include "opg/losses.hpp"
#include "opg/vec.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace opg {

enum class DriftModel { stationary, switching, smooth_drift };
DriftModel drift_model_from_string(const std::string &name);
std::string to_string(DriftModel model);

enum class StreamFamily { classification, regression };

// Synthetic stream recipe. A planted target path p_t drives the stream:
//   classification: features are uniform in [-scale, scale]^n, labels are
//     sign(<p_t, a>) flipped with probability noise_rate;
//   regression: features are +-scale on one coordinate and labels equal <a, p_t>,
//     so with |a| = scale > rho the planted point is the exact per-round minimizer
//     of |y - <a,x>| + weighted-l1 in one dimension.
// smooth_drift moves one coordinate by drift_magnitude * t^{-drift_decay} per round
// (decay 0: path length drift_magnitude*(T-1); decay 0.5: path length Theta(sqrt T)).
// switching redraws the target once at T/2; stationary never moves it.
struct SyntheticStreamSpec {
  std::size_t dimension = 1;
  DriftModel drift = DriftModel::stationary;
  double drift_magnitude = 0.0;
  double drift_decay = 0.0;
  double noise_rate = 0.0;
  double feature_scale = 1.0;
  StreamFamily family = StreamFamily::classification;
  double path_amplitude = 0.6;

  void validate() const;
};

struct GeneratedStream {
  std::vector<LabeledExample> examples;
  std::vector<Vec> planted_path;  // p_t per round; exact minimizer path for 1-D regression
  double planted_d0 = 0.0;        // sum of consecutive path distances (exact)
};

GeneratedStream generate_stream(const SyntheticStreamSpec &spec, std::uint64_t seed,
                                std::int64_t horizon);

enum class IngestFormat { csv, svmlight };
IngestFormat ingest_format_from_string(const std::string &name);

// csv: label first, features after, fixed width. svmlight: "label idx:val ...",
// 1-based indices densified to declared_dim (which svmlight requires; csv infers the
// width from the first row when declared_dim is 0). Labels must be exactly +-1.
// Malformed content raises IoError naming the line number.
std::vector<LabeledExample> ingest_dataset(const std::string &path, IngestFormat format,
                                           std::size_t declared_dim);

}  // namespace opg
