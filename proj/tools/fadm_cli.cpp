// fadm: frequency-domain degradation modeling pipeline.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include <json.hpp>

#include "fadm/error.hpp"
#include "fadm/kernels.hpp"
#include "fadm/pipeline.hpp"

namespace {

using fadm::fs::path;
using nlohmann::json;

json read_config(const std::string& file) {
  if (file.empty()) return json::object();
  std::ifstream in(file);
  if (!in) throw fadm::IoError("cannot open config " + file);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw fadm::ConfigError(file + ": " + e.what());
  }
}

json section(const json& cfg, const char* key) {
  return cfg.contains(key) ? cfg.at(key) : json::object();
}

fadm::CameraSpec camera_arg(const std::string& value) {
  // built-in names take a focal length suffix, e.g. canon_5d3@55
  const auto at = value.find('@');
  if (at != std::string::npos) {
    const std::string body = value.substr(0, at);
    const double f = std::stod(value.substr(at + 1));
    if (body == "canon_5d3") return fadm::cameras::canon_5d3(f);
    if (body == "nikon_d810") return fadm::cameras::nikon_d810(f);
    throw fadm::ConfigError("unknown built-in camera '" + body + "'");
  }
  return fadm::load_camera_spec(value);
}

fadm::EstimateOptions estimate_options(const json& j) {
  fadm::EstimateOptions o;
  o.eps = j.value("eps", o.eps);
  o.radial_bins = j.value("radial_bins", o.radial_bins);
  o.angular_samples = j.value("angular_samples", o.angular_samples);
  o.window = j.value("window", o.window);
  return o;
}

fadm::PatchOptions patch_options(const json& j) {
  fadm::PatchOptions p;
  p.patch_size = j.value("patch_size", p.patch_size);
  p.stride = j.value("stride", p.stride);
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-domain degradation modeling: estimate, learn and synthesize"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  bool verbose = false;
  app.add_option("--config", config_file, "pipeline config (JSON)");
  app.add_option("--seed", seed, "seed for every stochastic step");
  app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  app.add_flag("-v,--verbose", verbose, "progress output");

  std::string pairs_dir, out, model, image, hr_dir, ref_dir, test_dir, trainset, experiment;
  std::string source_spec, target_spec, camera_name, color = "y";
  std::optional<double> lambda, sigma, min_conf;
  std::optional<int> factor, patch_size, stride;

  auto* est = app.add_subcommand("estimate", "estimate the transfer cutoff of HR/LR pairs");
  est->add_option("--pairs", pairs_dir, "directory of <id>_hr.png / <id>_lr.png")->required();
  est->add_option("--out", out, "output directory")->required();

  auto* bts = app.add_subcommand("build-trainset", "label patch pairs for predictor training");
  bts->add_option("--pairs", pairs_dir)->required();
  bts->add_option("--out", out, "training set JSON")->required();
  bts->add_option("--patch", patch_size);
  bts->add_option("--stride", stride);
  bts->add_option("--min-confidence", min_conf);

  auto* trn = app.add_subcommand("train-predictor", "fit the cutoff predictor");
  auto* trn_pairs = trn->add_option("--pairs", pairs_dir);
  auto* trn_set = trn->add_option("--trainset", trainset);
  trn_pairs->excludes(trn_set);
  trn->add_option("--out", out, "model JSON")->required();
  trn->add_option("--lambda", lambda);
  trn->add_option("--camera", camera_name, "camera the model belongs to");
  trn->add_option("--patch", patch_size);
  trn->add_option("--stride", stride);
  trn->add_option("--min-confidence", min_conf);

  auto* prd = app.add_subcommand("predict", "predict the cutoff of an HR image");
  prd->add_option("--model", model)->required();
  prd->add_option("--image", image)->required();
  prd->add_option("--source", source_spec, "camera JSON or canon_5d3@<f> / nikon_d810@<f>");
  prd->add_option("--target", target_spec);
  prd->add_option("--out", out, "result JSON");

  auto* syn = app.add_subcommand("synthesize", "synthesize LR images for a target camera");
  syn->add_option("--hr", hr_dir)->required();
  syn->add_option("--model", model)->required();
  syn->add_option("--source", source_spec);
  syn->add_option("--target", target_spec);
  syn->add_option("--out", out)->required();
  syn->add_option("--factor", factor, "downsampling factor N");
  syn->add_option("--sigma", sigma, "read noise sigma");

  auto* evl = app.add_subcommand("evaluate", "PSNR/SSIM of test images against references");
  evl->add_option("--ref", ref_dir)->required();
  evl->add_option("--test", test_dir)->required();
  evl->add_option("--out", out, "report CSV")->required();
  evl->add_option("--color", color, "y (luminance) or rgb")->check(CLI::IsMember({"y", "rgb"}));

  auto* sim = app.add_subcommand("simulate", "run a simulator sweep and export its pairs");
  sim->add_option("--experiment", experiment, "experiment JSON");
  sim->add_option("--out", out)->required();

  auto* ab = app.add_subcommand("alpha-beta", "compare the pixel-pitch ratio with estimated cutoffs");
  ab->add_option("--experiment", experiment, "experiment JSON");
  ab->add_option("--out", out, "report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : fadm::kExitConfig;
  }

  try {
    const json cfg = read_config(config_file);
    fadm::RunContext ctx;
    ctx.seed = seed.value_or(cfg.value("seed", std::uint64_t{0}));
    ctx.jobs = jobs.value_or(cfg.value("jobs", 0));
    ctx.verbose = verbose || cfg.value("verbose", false);
    ctx.log = &std::cerr;
    if (ctx.jobs > 0) fadm::kernels::set_threads(ctx.jobs);

    auto camera_from = [&](const std::string& flag, const char* key) -> std::optional<fadm::CameraSpec> {
      if (!flag.empty()) return camera_arg(flag);
      if (cfg.contains(key)) return camera_arg(cfg.at(key).get<std::string>());
      return std::nullopt;
    };
    auto training_options = [&] {
      fadm::TrainingOptions t;
      t.patches = patch_options(section(cfg, "patches"));
      t.estimate = estimate_options(section(cfg, "estimate"));
      t.min_confidence = cfg.value("min_confidence", t.min_confidence);
      if (patch_size) t.patches.patch_size = *patch_size;
      if (stride) t.patches.stride = *stride;
      if (min_conf) t.min_confidence = *min_conf;
      return t;
    };
    auto experiment_json = [&](const char* key) {
      return experiment.empty() ? section(cfg, key) : read_config(experiment);
    };

    fadm::CommandResult r;
    if (*est) {
      r = fadm::cmd_estimate(pairs_dir, out, estimate_options(section(cfg, "estimate")), ctx);
    } else if (*bts) {
      r = fadm::cmd_build_trainset(pairs_dir, out, training_options(), ctx);
    } else if (*trn) {
      fadm::TrainArgs a;
      if (!pairs_dir.empty()) a.pairs_dir = path(pairs_dir);
      if (!trainset.empty()) a.trainset = path(trainset);
      a.out = out;
      a.lambda = lambda.value_or(cfg.value("lambda", 1.0));
      a.camera = camera_name;
      if (a.camera.empty()) {
        if (auto c = camera_from("", "source")) a.camera = c->name;
      }
      a.training = training_options();
      r = fadm::cmd_train_predictor(a, ctx);
    } else if (*prd) {
      fadm::PredictArgs a;
      a.model = model;
      a.image = image;
      a.source = camera_from(source_spec, "source");
      a.target = camera_from(target_spec, "target");
      if (!out.empty()) a.out = path(out);
      a.print = &std::cout;
      r = fadm::cmd_predict(a, ctx);
    } else if (*syn) {
      fadm::SynthesizeArgs a;
      a.hr_dir = hr_dir;
      a.model = model;
      const auto src = camera_from(source_spec, "source");
      const auto tgt = camera_from(target_spec, "target");
      if (!src || !tgt) throw fadm::ConfigError("synthesize needs --source and --target cameras");
      a.source = *src;
      a.target = *tgt;
      a.out_dir = out;
      if (cfg.contains("degradation")) a.degradation = cfg.at("degradation").get<fadm::DegradationConfig>();
      if (factor) a.degradation.downsample_factor = *factor;
      if (sigma) a.degradation.noise_sigma = *sigma;
      r = fadm::cmd_synthesize(a, ctx);
    } else if (*evl) {
      r = fadm::cmd_evaluate(ref_dir, test_dir, out,
                             color == "rgb" ? fadm::ColorMode::per_channel : fadm::ColorMode::luminance,
                             ctx);
    } else if (*sim) {
      r = fadm::cmd_simulate(experiment_json("simulate"), out, ctx);
    } else if (*ab) {
      json j = experiment_json("alpha_beta");
      if (!j.contains("seed")) j["seed"] = ctx.seed;
      r = fadm::cmd_alpha_beta(j.get<fadm::AlphaBetaConfig>(), out, ctx);
    }
    return r.exit_code;
  } catch (const fadm::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fadm::kExitIo;
  } catch (const fadm::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fadm::kExitConfig;
  } catch (const json::exception& e) {
    std::cerr << "error: config: " << e.what() << '\n';
    return fadm::kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fadm::kExitConfig;
  }
}
