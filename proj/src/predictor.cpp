#include "fadm/predictor.hpp"

#define EIGEN_DONT_PARALLELIZE
#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>

#include "fadm/error.hpp"
#include "fadm/spectral.hpp"

namespace fadm {

namespace {

constexpr int kPredictorVersion = 1;
constexpr double kRelativeEps = 1e-12;

bool is_flat(const Image& img) {
  const auto s = img.samples();
  const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
  return *hi - *lo < 1e-12;
}

std::map<std::string, RegressorFactory>& registry() {
  static std::map<std::string, RegressorFactory> reg{{"ridge", &RidgeRegressor::from_json}};
  return reg;
}

std::mutex& registry_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

void PatchOptions::validate() const {
  if (patch_size < 64) throw ConfigError("patch_size must be at least 64");
  if (stride <= 0) throw ConfigError("stride must be positive");
}

std::vector<int> patch_anchors(int length, int patch_size, int stride) {
  if (patch_size <= 0 || stride <= 0) throw InputError("patch_anchors: non-positive size or stride");
  if (length < patch_size) throw InputError("image smaller than the patch size");
  std::vector<int> out;
  int pos = 0;
  for (; pos + patch_size <= length; pos += stride) out.push_back(pos);
  if (out.back() + patch_size < length) out.push_back(length - patch_size);
  return out;
}

PatchSet extract_patches(const Image& hr, const Image* lr, const PatchOptions& opts,
                         const std::string& id) {
  opts.validate();
  if (lr && (lr->width() != hr.width() || lr->height() != hr.height() ||
             lr->channels() != hr.channels())) {
    throw InputError("extract_patches: HR and LR dimensions differ");
  }
  PatchSet set;
  set.patch_size = opts.patch_size;
  set.stride = opts.stride;
  set.source_image_id = id;
  const auto xs = patch_anchors(hr.width(), opts.patch_size, opts.stride);
  const auto ys = patch_anchors(hr.height(), opts.patch_size, opts.stride);
  for (int y : ys) {
    for (int x : xs) {
      set.origins.emplace_back(x, y);
      set.hr.push_back(crop(hr, x, y, opts.patch_size, opts.patch_size));
      if (lr) set.lr.push_back(crop(*lr, x, y, opts.patch_size, opts.patch_size));
    }
  }
  return set;
}

std::vector<double> spectrum_features(const Image& patch, int angular_samples) {
  if (patch.width() != patch.height()) throw InputError("spectrum_features: patch must be square");
  const Spectrum spec = fft2(apply_hann(luminance(patch)));
  double peak = 0.0;
  for (const auto& b : spec.bins) peak = std::max(peak, std::abs(b));
  // all-zero input: any positive floor gives a flat profile
  const double eps = peak > 0.0 ? kRelativeEps * peak : 1.0;
  const RealGrid logmag = log_magnitude(spec, eps);
  RadialProfile prof = polar_radial_average(logmag, patch.width() / 2, angular_samples, false);
  const double mean =
      std::accumulate(prof.values.begin(), prof.values.end(), 0.0) / prof.values.size();
  for (double& v : prof.values) v -= mean;
  return std::move(prof.values);
}

TrainingSet build_training_set(std::span<const ImagePair> pairs, const TrainingOptions& opts) {
  opts.patches.validate();
  struct Job {
    const ImagePair* pair;
    int x, y, index;
  };
  std::vector<Job> jobs;
  for (const auto& p : pairs) {
    if (p.hr.width() != p.lr.width() || p.hr.height() != p.lr.height()) {
      throw InputError("pair '" + p.id + "': HR and LR dimensions differ");
    }
    const auto xs = patch_anchors(p.hr.width(), opts.patches.patch_size, opts.patches.stride);
    const auto ys = patch_anchors(p.hr.height(), opts.patches.patch_size, opts.patches.stride);
    int index = 0;
    for (int y : ys)
      for (int x : xs) jobs.push_back({&p, x, y, index++});
  }

  const int n = static_cast<int>(jobs.size());
  std::vector<TrainingSample> results(n);
  std::vector<std::string> errors(n);
  const int ps = opts.patches.patch_size;
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    const Job& job = jobs[i];
    try {
      const Image hr = crop(job.pair->hr, job.x, job.y, ps, ps);
      const Image lr = crop(job.pair->lr, job.x, job.y, ps, ps);
      TrainingSample s;
      if (is_flat(luminance(hr))) {
        s.confidence = 0.0;
      } else {
        const TransferEstimate est = estimate_pair_cutoff(hr, lr, opts.estimate);
        s.label = est.cutoff_cyc_per_sample;
        s.confidence = est.confidence;
        s.features = spectrum_features(hr, opts.estimate.angular_samples);
      }
      s.source = job.pair->id + "#" + std::to_string(job.index);
      results[i] = std::move(s);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (int i = 0; i < n; ++i) {
    if (!errors[i].empty()) throw InputError("pair '" + jobs[i].pair->id + "': " + errors[i]);
  }

  TrainingSet set;
  set.patches = opts.patches;
  set.examined = n;
  for (auto& s : results) {
    if (s.confidence < opts.min_confidence) {
      ++set.dropped;
      continue;
    }
    set.samples.push_back(std::move(s));
  }
  if (set.samples.empty()) {
    throw EmptyDatasetError("no training sample passed the confidence threshold (" +
                            std::to_string(set.dropped) + " dropped)");
  }
  set.feature_dim = static_cast<int>(set.samples.front().features.size());
  return set;
}

RidgeRegressor::RidgeRegressor(std::vector<double> weights, double bias, std::vector<double> mean,
                               std::vector<double> scale)
    : weights_(std::move(weights)), bias_(bias), mean_(std::move(mean)), scale_(std::move(scale)) {
  if (mean_.size() != weights_.size() || scale_.size() != weights_.size()) {
    throw ConfigError("ridge: weight, mean and scale sizes differ");
  }
  for (double s : scale_) {
    if (!(s > 0.0) || !std::isfinite(s)) throw ConfigError("ridge: feature scale must be positive");
  }
}

RidgeRegressor::Fit RidgeRegressor::fit(std::span<const TrainingSample> samples, double lambda) {
  if (samples.empty()) throw EmptyDatasetError("ridge: no samples");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("ridge: lambda must be >= 0");
  const int n = static_cast<int>(samples.size());
  const int d = static_cast<int>(samples.front().features.size());
  if (d == 0) throw InputError("ridge: empty feature vectors");
  for (const auto& s : samples) {
    if (static_cast<int>(s.features.size()) != d) throw InputError("ridge: feature sizes differ");
  }

  std::vector<double> mean(d, 0.0), scale(d, 0.0);
  for (const auto& s : samples)
    for (int k = 0; k < d; ++k) mean[k] += s.features[k];
  for (double& m : mean) m /= n;
  for (const auto& s : samples)
    for (int k = 0; k < d; ++k) scale[k] += (s.features[k] - mean[k]) * (s.features[k] - mean[k]);
  for (double& v : scale) {
    v = std::sqrt(v / n);
    if (!(v > 1e-15)) v = 1.0;
  }

  double ybar = 0.0;
  double ymin = samples.front().label, ymax = ymin;
  for (const auto& s : samples) {
    ybar += s.label;
    ymin = std::min(ymin, s.label);
    ymax = std::max(ymax, s.label);
  }
  ybar /= n;

  Fit out;
  std::vector<double> w(d, 0.0);
  if (ymax - ymin <= 1e-15) {
    out.constant = true;
  } else {
    Eigen::MatrixXd z(n, d);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < d; ++k) z(i, k) = (samples[i].features[k] - mean[k]) / scale[k];
      y(i) = samples[i].label - ybar;
    }
    Eigen::VectorXd sol;
    if (lambda > 0.0) {
      Eigen::MatrixXd a = z.transpose() * z;
      a.diagonal().array() += lambda;
      sol = a.ldlt().solve(z.transpose() * y);
    } else {
      sol = z.completeOrthogonalDecomposition().solve(y);
    }
    for (int k = 0; k < d; ++k) w[k] = sol(k);
  }
  out.model = std::make_shared<RidgeRegressor>(std::move(w), ybar, std::move(mean), std::move(scale));

  double sse = 0.0;
  for (const auto& s : samples) {
    const double p = std::clamp(out.model->predict(s.features), kMinCutoff, 0.5);
    sse += (p - s.label) * (p - s.label);
  }
  out.training_rmse = std::sqrt(sse / n);
  return out;
}

double RidgeRegressor::predict(std::span<const double> features) const {
  if (features.size() != weights_.size()) {
    throw InputError("ridge: expected " + std::to_string(weights_.size()) + " features, got " +
                     std::to_string(features.size()));
  }
  double acc = bias_;
  for (std::size_t k = 0; k < weights_.size(); ++k) {
    acc += weights_[k] * ((features[k] - mean_[k]) / scale_[k]);
  }
  return acc;
}

nlohmann::json RidgeRegressor::to_json() const {
  return {{"kind", "ridge"},
          {"weights", weights_},
          {"bias", bias_},
          {"feature_mean", mean_},
          {"feature_scale", scale_}};
}

std::unique_ptr<CutoffRegressor> RidgeRegressor::from_json(const nlohmann::json& j) {
  try {
    return std::make_unique<RidgeRegressor>(
        j.at("weights").get<std::vector<double>>(), j.at("bias").get<double>(),
        j.at("feature_mean").get<std::vector<double>>(),
        j.at("feature_scale").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("ridge model: ") + e.what());
  }
}

void register_regressor(const std::string& kind, RegressorFactory factory) {
  std::lock_guard lock(registry_mutex());
  registry()[kind] = std::move(factory);
}

CutoffPredictor train(std::span<const TrainingSample> samples, double lambda,
                      const PatchOptions& patches, const std::string& camera) {
  patches.validate();
  const auto fit = RidgeRegressor::fit(samples, lambda);
  if (fit.model->feature_dim() != patches.patch_size / 2) {
    throw InputError("train: feature length does not match patch size " +
                     std::to_string(patches.patch_size));
  }
  CutoffPredictor pred;
  pred.backend = fit.model;
  pred.patches = patches;
  pred.meta.camera = camera;
  pred.meta.sample_count = static_cast<int>(samples.size());
  pred.meta.lambda = lambda;
  pred.meta.training_rmse = fit.training_rmse;
  pred.meta.constant = fit.constant;
  return pred;
}

PatchPrediction predict_patch(const CutoffPredictor& pred, const Image& hr_patch) {
  if (!pred.backend) throw ConfigError("predictor has no backend");
  if (hr_patch.width() != pred.patches.patch_size || hr_patch.height() != pred.patches.patch_size) {
    throw InputError("patch must be " + std::to_string(pred.patches.patch_size) + " square");
  }
  PatchPrediction out;
  const Image y = luminance(hr_patch);
  y.require_finite();
  if (is_flat(y)) {
    // no spectral content: fall back to the intercept
    std::vector<double> zeros(pred.feature_dim(), 0.0);
    out.cutoff = std::clamp(pred.backend->predict(zeros), kMinCutoff, 0.5);
    out.low_confidence = true;
    return out;
  }
  const auto f = spectrum_features(y, pred.angular_samples);
  out.cutoff = std::clamp(pred.backend->predict(f), kMinCutoff, 0.5);
  return out;
}

ImagePrediction predict_image(const CutoffPredictor& pred, const Image& hr) {
  const PatchSet set = extract_patches(hr, nullptr, pred.patches);
  const int n = set.count();
  std::vector<PatchPrediction> results(n);
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      results[i] = predict_patch(pred, set.hr[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  for (const auto& e : errors)
    if (!e.empty()) throw InputError(e);
  ImagePrediction out;
  double sum = 0.0;
  for (const auto& r : results) {
    out.patch_cutoffs.push_back(r.cutoff);
    sum += r.cutoff;
    out.low_confidence_patches += r.low_confidence ? 1 : 0;
  }
  out.cutoff = sum / n;
  return out;
}

CorrectedCutoff correct_cutoff(double cutoff_source, const CameraSpec& source,
                               const CameraSpec& target) {
  if (!(cutoff_source > 0.0) || cutoff_source > 0.5) {
    throw DomainError("correct_cutoff: source cutoff must be in (0, 0.5]");
  }
  CorrectedCutoff out;
  out.alpha = pixel_size_ratio(source, target);
  const double raw = out.alpha * cutoff_source;
  out.clamped = raw > 0.5;
  out.cutoff = std::min(raw, 0.5);
  return out;
}

nlohmann::json predictor_to_json(const CutoffPredictor& pred) {
  if (!pred.backend) throw ConfigError("predictor has no backend");
  return {{"format", "fadm-cutoff-predictor"},
          {"version", kPredictorVersion},
          {"backend", pred.backend->to_json()},
          {"features",
           {{"patch_size", pred.patches.patch_size},
            {"stride", pred.patches.stride},
            {"radial_bins", pred.patches.patch_size / 2},
            {"angular_samples", pred.angular_samples},
            {"relative_eps", kRelativeEps}}},
          {"meta",
           {{"camera", pred.meta.camera},
            {"sample_count", pred.meta.sample_count},
            {"lambda", pred.meta.lambda},
            {"training_rmse", pred.meta.training_rmse},
            {"constant", pred.meta.constant}}}};
}

CutoffPredictor predictor_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "fadm-cutoff-predictor") {
      throw ConfigError("not a cutoff predictor file");
    }
    const int version = j.at("version").get<int>();
    if (version != kPredictorVersion) {
      throw ConfigError("unsupported predictor version " + std::to_string(version));
    }
    const auto& b = j.at("backend");
    const std::string kind = b.at("kind").get<std::string>();
    RegressorFactory factory;
    {
      std::lock_guard lock(registry_mutex());
      const auto it = registry().find(kind);
      if (it == registry().end()) throw ConfigError("unknown regressor kind '" + kind + "'");
      factory = it->second;
    }
    CutoffPredictor pred;
    pred.backend = factory(b);
    const auto& f = j.at("features");
    pred.patches.patch_size = f.at("patch_size").get<int>();
    pred.patches.stride = f.at("stride").get<int>();
    pred.angular_samples = f.at("angular_samples").get<int>();
    pred.patches.validate();
    if (pred.backend->feature_dim() != pred.patches.patch_size / 2) {
      throw ConfigError("predictor feature length does not match its patch size");
    }
    const auto& m = j.at("meta");
    pred.meta.camera = m.at("camera").get<std::string>();
    pred.meta.sample_count = m.at("sample_count").get<int>();
    pred.meta.lambda = m.at("lambda").get<double>();
    pred.meta.training_rmse = m.at("training_rmse").get<double>();
    pred.meta.constant = m.at("constant").get<bool>();
    return pred;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("predictor file: ") + e.what());
  }
}

void save_predictor(const CutoffPredictor& pred, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << predictor_to_json(pred).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

CutoffPredictor load_predictor(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return predictor_from_json(j);
}

nlohmann::json training_set_to_json(const TrainingSet& set) {
  nlohmann::json samples = nlohmann::json::array();
  for (const auto& s : set.samples) {
    samples.push_back({{"source", s.source},
                       {"label", s.label},
                       {"confidence", s.confidence},
                       {"features", s.features}});
  }
  return {{"format", "fadm-training-set"},
          {"version", 1},
          {"patch_size", set.patches.patch_size},
          {"stride", set.patches.stride},
          {"examined", set.examined},
          {"dropped", set.dropped},
          {"feature_dim", set.feature_dim},
          {"samples", std::move(samples)}};
}

TrainingSet training_set_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "fadm-training-set") {
      throw ConfigError("not a training set file");
    }
    TrainingSet set;
    set.patches.patch_size = j.at("patch_size").get<int>();
    set.patches.stride = j.at("stride").get<int>();
    set.examined = j.at("examined").get<int>();
    set.dropped = j.at("dropped").get<int>();
    set.feature_dim = j.at("feature_dim").get<int>();
    for (const auto& s : j.at("samples")) {
      TrainingSample t;
      t.source = s.at("source").get<std::string>();
      t.label = s.at("label").get<double>();
      t.confidence = s.at("confidence").get<double>();
      t.features = s.at("features").get<std::vector<double>>();
      if (static_cast<int>(t.features.size()) != set.feature_dim) {
        throw ConfigError("training sample '" + t.source + "' has the wrong feature length");
      }
      set.samples.push_back(std::move(t));
    }
    return set;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("training set: ") + e.what());
  }
}

}  // namespace fadm
