#pragma once

// Cutoff-frequency learning: HR patch spectrum -> f_c.
//
// Labels come from estimate_pair_cutoff on registered HR/LR patch pairs;
// features are the mean-centered radial log-magnitude profile of the
// windowed HR patch. The regressor sits behind CutoffRegressor so other
// backends can be registered without touching the pipeline.

#include <filesystem>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fadm/image.hpp"
#include "fadm/optics.hpp"
#include "fadm/transfer.hpp"

namespace fadm {

struct PatchOptions {
  int patch_size = 320;
  int stride = 160;

  void validate() const;
};

/// Patch origins along an axis: 0, stride, 2 stride, ... with a final
/// origin anchored to the far edge so the whole axis is covered.
std::vector<int> patch_anchors(int length, int patch_size, int stride);

struct PatchSet {
  std::vector<Image> hr;
  std::vector<Image> lr;  // empty for unpaired images
  std::vector<std::pair<int, int>> origins;  // (x, y), row-major order
  int patch_size = 0;
  int stride = 0;
  std::string source_image_id;

  int count() const { return static_cast<int>(hr.size()); }
};

/// Row-major overlapping patch grid. `lr` may be null; otherwise it must
/// match `hr` in size.
PatchSet extract_patches(const Image& hr, const Image* lr, const PatchOptions& opts,
                         const std::string& id = {});

struct ImagePair {
  std::string id;
  Image hr;
  Image lr;  // registered and resampled to the HR grid
};

struct TrainingSample {
  std::vector<double> features;
  double label = 0.0;  // cycles/sample
  double confidence = 0.0;
  std::string source;  // "<pair id>#<patch index>"
};

struct TrainingOptions {
  PatchOptions patches;
  EstimateOptions estimate;
  double min_confidence = 0.5;
};

struct TrainingSet {
  std::vector<TrainingSample> samples;
  int dropped = 0;  // low-confidence patches
  int examined = 0;
  int feature_dim = 0;
  PatchOptions patches;
};

/// Mean-centered radial log-magnitude profile of the Hann-windowed patch
/// (luminance). The log floor is relative to the largest bin, which makes
/// the features exactly invariant to a global gain.
std::vector<double> spectrum_features(const Image& patch, int angular_samples = 360);

/// Labels every patch pair; drops labels below opts.min_confidence.
/// Throws EmptyDatasetError when nothing survives.
TrainingSet build_training_set(std::span<const ImagePair> pairs, const TrainingOptions& opts = {});

class CutoffRegressor {
 public:
  virtual ~CutoffRegressor() = default;
  virtual std::string kind() const = 0;
  virtual int feature_dim() const = 0;
  /// Raw regression output (unclamped).
  virtual double predict(std::span<const double> features) const = 0;
  virtual nlohmann::json to_json() const = 0;
};

/// Closed-form ridge regression on standardized features.
class RidgeRegressor final : public CutoffRegressor {
 public:
  RidgeRegressor(std::vector<double> weights, double bias, std::vector<double> mean,
                 std::vector<double> scale);

  struct Fit;
  /// lambda = 0 gives the minimum-norm least-squares solution.
  static Fit fit(std::span<const TrainingSample> samples, double lambda);
  static std::unique_ptr<CutoffRegressor> from_json(const nlohmann::json& j);

  std::string kind() const override { return "ridge"; }
  int feature_dim() const override { return static_cast<int>(weights_.size()); }
  double predict(std::span<const double> features) const override;
  nlohmann::json to_json() const override;

  const std::vector<double>& weights() const { return weights_; }
  double bias() const { return bias_; }

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  std::vector<double> mean_;
  std::vector<double> scale_;
};

struct RidgeRegressor::Fit {
  std::shared_ptr<const RidgeRegressor> model;
  double training_rmse = 0.0;
  bool constant = false;  // all labels identical
};

using RegressorFactory = std::function<std::unique_ptr<CutoffRegressor>(const nlohmann::json&)>;
/// Makes a backend kind loadable from predictor files.
void register_regressor(const std::string& kind, RegressorFactory factory);

struct PredictorMeta {
  std::string camera;
  int sample_count = 0;
  double lambda = 0.0;
  double training_rmse = 0.0;
  bool constant = false;
};

struct CutoffPredictor {
  std::shared_ptr<const CutoffRegressor> backend;
  PatchOptions patches;
  int angular_samples = 360;
  PredictorMeta meta;

  int feature_dim() const { return backend ? backend->feature_dim() : 0; }
};

/// Smallest cutoff a prediction is clamped to.
inline constexpr double kMinCutoff = 1e-6;

CutoffPredictor train(std::span<const TrainingSample> samples, double lambda,
                      const PatchOptions& patches = {}, const std::string& camera = {});

struct PatchPrediction {
  double cutoff = 0.0;        // clamped to (0, 0.5]
  bool low_confidence = false;  // featureless (flat) patch
};

PatchPrediction predict_patch(const CutoffPredictor& pred, const Image& hr_patch);

struct ImagePrediction {
  double cutoff = 0.0;  // arithmetic mean of patch predictions
  std::vector<double> patch_cutoffs;
  int low_confidence_patches = 0;
};

ImagePrediction predict_image(const CutoffPredictor& pred, const Image& hr);

struct CorrectedCutoff {
  double cutoff = 0.0;
  double alpha = 1.0;
  bool clamped = false;  // alpha * f_c exceeded Nyquist
};

/// f_c,target = alpha * f_c,source with alpha = pixel_size_ratio(source, target).
CorrectedCutoff correct_cutoff(double cutoff_source, const CameraSpec& source,
                               const CameraSpec& target);

nlohmann::json predictor_to_json(const CutoffPredictor& pred);
CutoffPredictor predictor_from_json(const nlohmann::json& j);
void save_predictor(const CutoffPredictor& pred, const std::filesystem::path& path);
CutoffPredictor load_predictor(const std::filesystem::path& path);

nlohmann::json training_set_to_json(const TrainingSet& set);
TrainingSet training_set_from_json(const nlohmann::json& j);

}  // namespace fadm
