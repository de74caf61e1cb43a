#include "fadm/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "fadm/error.hpp"
#include "fadm/image_io.hpp"
#include "fadm/plot.hpp"

namespace fadm {

namespace {

bool is_image_ext(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".pgm" || ext == ".ppm";
}

void info(const RunContext& ctx, const std::string& msg) {
  if (ctx.verbose && ctx.log) *ctx.log << msg << '\n';
}

void warn(const RunContext& ctx, const std::string& msg) {
  if (ctx.log) *ctx.log << "warning: " << msg << '\n';
}

void require_dir(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void write_json(const nlohmann::json& j, const fs::path& path) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

nlohmann::json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::optional<double> sidecar_truth(const PairEntry& p) {
  if (!p.sidecar) return std::nullopt;
  const auto j = read_json(*p.sidecar);
  if (!j.contains("true_cutoff")) return std::nullopt;
  return j.at("true_cutoff").get<double>();
}

// Runs fn(i) for every item; exceptions become per-item problems.
template <typename Fn>
std::vector<std::string> for_each_item(int n, Fn&& fn) {
  std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < n; ++i) {
    try {
      fn(i);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  }
  return errors;
}

int finish(CommandResult& r, int total) {
  if (r.processed == 0 && total > 0) return r.exit_code = kExitConfig;
  r.exit_code = r.problems.empty() ? kExitOk : kExitPartial;
  return r.exit_code;
}

std::vector<ImagePair> load_pairs(const PairListing& listing, CommandResult& result,
                                  const RunContext& ctx) {
  const int n = static_cast<int>(listing.pairs.size());
  std::vector<ImagePair> pairs(n);
  const auto errors = for_each_item(n, [&](int i) {
    const auto& e = listing.pairs[i];
    pairs[i] = ImagePair{e.id, read_image(e.hr), read_image(e.lr)};
    if (pairs[i].hr.width() != pairs[i].lr.width() || pairs[i].hr.height() != pairs[i].lr.height()) {
      throw InputError("HR and LR dimensions differ");
    }
  });
  std::vector<ImagePair> ok;
  for (int i = 0; i < n; ++i) {
    if (errors[i].empty()) {
      ok.push_back(std::move(pairs[i]));
    } else {
      result.problems.push_back(listing.pairs[i].id + ": " + errors[i]);
      warn(ctx, result.problems.back());
    }
  }
  return ok;
}

PairListing checked_listing(const fs::path& dir, CommandResult& result, const RunContext& ctx) {
  PairListing listing = list_pairs(dir);
  for (const auto& u : listing.unmatched) {
    result.problems.push_back(u + ": no matching partner");
    warn(ctx, result.problems.back());
  }
  if (listing.pairs.empty()) {
    throw IoError("no image pairs in " + dir.string() +
                  " (expected <id>_hr.png and <id>_lr.png, optional <id>.json)");
  }
  return listing;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

PairListing list_pairs(const fs::path& dir) {
  require_dir(dir);
  std::map<std::string, fs::path> hr, lr;
  std::map<std::string, fs::path> sidecars;
  std::vector<std::string> others;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const fs::path p = entry.path();
    const std::string stem = p.stem().string();
    if (p.extension() == ".json") {
      sidecars[stem] = p;
      continue;
    }
    if (!is_image_ext(p)) continue;
    auto ends_with = [&](const std::string& suffix) {
      return stem.size() > suffix.size() &&
             stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0;
    };
    if (ends_with("_hr")) {
      hr[stem.substr(0, stem.size() - 3)] = p;
    } else if (ends_with("_lr")) {
      lr[stem.substr(0, stem.size() - 3)] = p;
    } else {
      others.push_back(p.filename().string());
    }
  }
  PairListing out;
  for (const auto& [id, path] : hr) {
    const auto it = lr.find(id);
    if (it == lr.end()) {
      out.unmatched.push_back(path.filename().string());
      continue;
    }
    PairEntry e{id, path, it->second, std::nullopt};
    if (const auto s = sidecars.find(id); s != sidecars.end()) e.sidecar = s->second;
    out.pairs.push_back(std::move(e));
  }
  for (const auto& [id, path] : lr) {
    if (!hr.count(id)) out.unmatched.push_back(path.filename().string());
  }
  for (auto& o : others) out.unmatched.push_back(std::move(o));
  std::sort(out.unmatched.begin(), out.unmatched.end());
  return out;
}

std::vector<fs::path> list_images(const fs::path& dir) {
  require_dir(dir);
  std::vector<fs::path> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_ext(entry.path())) out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

CommandResult cmd_estimate(const fs::path& pairs_dir, const fs::path& out_dir,
                           const EstimateOptions& opts, const RunContext& ctx) {
  CommandResult result;
  const PairListing listing = checked_listing(pairs_dir, result, ctx);
  make_dirs(out_dir);

  const int n = static_cast<int>(listing.pairs.size());
  std::vector<TransferEstimate> estimates(n);
  std::vector<std::optional<double>> truths(n);
  const auto errors = for_each_item(n, [&](int i) {
    const auto& e = listing.pairs[i];
    const Image hr = read_image(e.hr);
    const Image lr = read_image(e.lr);
    estimates[i] = estimate_pair_cutoff(hr, lr, opts);
    truths[i] = sidecar_truth(e);
    write_profile_csv(estimates[i].profile, out_dir / (e.id + "_profile.csv"));
    write_profile_plot(estimates[i], out_dir / (e.id + "_profile.png"));
  });

  auto csv = open_out(out_dir / "estimates.csv");
  csv << "id,cutoff_bin,cutoff_cyc_per_sample,plateau,confidence,true_cutoff,relative_error\n";
  for (int i = 0; i < n; ++i) {
    const auto& id = listing.pairs[i].id;
    if (!errors[i].empty()) {
      result.problems.push_back(id + ": " + errors[i]);
      warn(ctx, result.problems.back());
      continue;
    }
    const auto& est = estimates[i];
    csv << id << ',' << est.cutoff_bin << ',' << format_number(est.cutoff_cyc_per_sample) << ','
        << format_number(est.plateau_level) << ',' << format_number(est.confidence) << ',';
    if (truths[i]) {
      csv << format_number(*truths[i]) << ','
          << format_number((est.cutoff_cyc_per_sample - *truths[i]) / *truths[i]);
    } else {
      csv << ',';
    }
    csv << '\n';
    ++result.processed;
    info(ctx, id + ": f_c = " + format_number(est.cutoff_cyc_per_sample) +
                  " (confidence " + format_number(est.confidence) + ")");
  }
  if (!csv) throw IoError("write failed: estimates.csv");
  finish(result, n);
  return result;
}

CommandResult cmd_build_trainset(const fs::path& pairs_dir, const fs::path& out_json,
                                 const TrainingOptions& opts, const RunContext& ctx) {
  CommandResult result;
  const PairListing listing = checked_listing(pairs_dir, result, ctx);
  const auto pairs = load_pairs(listing, result, ctx);
  if (pairs.empty()) {
    result.exit_code = kExitConfig;
    return result;
  }
  const TrainingSet set = build_training_set(pairs, opts);
  if (out_json.has_parent_path()) make_dirs(out_json.parent_path());
  write_json(training_set_to_json(set), out_json);
  result.processed = static_cast<int>(pairs.size());
  info(ctx, std::to_string(set.samples.size()) + " samples kept, " + std::to_string(set.dropped) +
                " dropped below confidence " + format_number(opts.min_confidence));
  finish(result, static_cast<int>(listing.pairs.size()));
  return result;
}

CommandResult cmd_train_predictor(const TrainArgs& args, const RunContext& ctx) {
  CommandResult result;
  TrainingSet set;
  if (args.trainset) {
    set = training_set_from_json(read_json(*args.trainset));
  } else if (args.pairs_dir) {
    const PairListing listing = checked_listing(*args.pairs_dir, result, ctx);
    const auto pairs = load_pairs(listing, result, ctx);
    if (pairs.empty()) {
      result.exit_code = kExitConfig;
      return result;
    }
    set = build_training_set(pairs, args.training);
  } else {
    throw ConfigError("train-predictor needs --pairs or --trainset");
  }
  if (set.samples.size() < 2) throw EmptyDatasetError("at least two training samples are required");
  const CutoffPredictor pred = train(set.samples, args.lambda, set.patches, args.camera);
  if (pred.meta.constant) warn(ctx, "all labels are identical; the predictor is constant");
  if (args.out.has_parent_path()) make_dirs(args.out.parent_path());
  save_predictor(pred, args.out);
  result.processed = static_cast<int>(set.samples.size());
  info(ctx, "trained on " + std::to_string(set.samples.size()) + " samples, training RMSE " +
                format_number(pred.meta.training_rmse));
  result.exit_code = result.problems.empty() ? kExitOk : kExitPartial;
  return result;
}

CommandResult cmd_predict(const PredictArgs& args, const RunContext& ctx) {
  CommandResult result;
  const CutoffPredictor pred = load_predictor(args.model);
  const Image img = read_image(args.image);
  const ImagePrediction p = predict_image(pred, img);
  nlohmann::json j = {{"image", args.image.filename().string()},
                      {"f_c_source", p.cutoff},
                      {"patch_cutoffs", p.patch_cutoffs},
                      {"low_confidence_patches", p.low_confidence_patches}};
  if (args.source && args.target) {
    const CorrectedCutoff c = correct_cutoff(p.cutoff, *args.source, *args.target);
    j["alpha"] = c.alpha;
    j["f_c_target"] = c.cutoff;
    j["clamped"] = c.clamped;
    if (c.clamped) warn(ctx, "corrected cutoff clamped to 0.5");
  }
  if (args.out) write_json(j, *args.out);
  if (args.print) *args.print << j.dump(2) << '\n';
  result.processed = 1;
  return result;
}

CommandResult cmd_synthesize(const SynthesizeArgs& args, const RunContext& ctx) {
  CommandResult result;
  args.degradation.validate();
  const CutoffPredictor pred = load_predictor(args.model);
  if (!pred.meta.camera.empty() && pred.meta.camera != args.source.name) {
    warn(ctx, "model was trained for '" + pred.meta.camera + "', source spec is '" +
                  args.source.name + "'");
  }
  const double alpha = pixel_size_ratio(args.source, args.target);
  const auto images = list_images(args.hr_dir);
  if (images.empty()) throw IoError("no images in " + args.hr_dir.string());
  make_dirs(args.out_dir / "HR");
  make_dirs(args.out_dir / "LR");

  struct Row {
    double f_source = 0.0;
    CorrectedCutoff corrected;
  };
  const int n = static_cast<int>(images.size());
  std::vector<Row> rows(n);
  const auto errors = for_each_item(n, [&](int i) {
    const Image hr = read_image(images[i]);
    const ImagePrediction p = predict_image(pred, hr);
    rows[i].f_source = p.cutoff;
    rows[i].corrected = correct_cutoff(p.cutoff, args.source, args.target);
    DegradationConfig cfg = args.degradation;
    cfg.cutoff_cyc_per_sample = rows[i].corrected.cutoff;
    cfg.rng_seed = derive_seed(ctx.seed, static_cast<std::uint64_t>(i));
    const Image lr = synthesize_lr(hr, cfg);
    const std::string name = images[i].stem().string() + ".png";
    write_png(hr, args.out_dir / "HR" / name);
    write_png(lr, args.out_dir / "LR" / name);
    write_json({{"file", name},
                {"f_c_source", p.cutoff},
                {"alpha", rows[i].corrected.alpha},
                {"f_c_target", rows[i].corrected.cutoff},
                {"clamped", rows[i].corrected.clamped},
                {"degradation", cfg},
                {"source", args.source},
                {"target", args.target}},
               args.out_dir / "LR" / (images[i].stem().string() + ".json"));
  });

  auto csv = open_out(args.out_dir / "manifest.csv");
  csv << "file,f_c_source,alpha,f_c_target,N,sigma\n";
  for (int i = 0; i < n; ++i) {
    const std::string name = images[i].stem().string() + ".png";
    if (!errors[i].empty()) {
      result.problems.push_back(images[i].filename().string() + ": " + errors[i]);
      warn(ctx, result.problems.back());
      continue;
    }
    if (rows[i].corrected.clamped) warn(ctx, name + ": target cutoff clamped to 0.5");
    csv << name << ',' << format_number(rows[i].f_source) << ',' << format_number(alpha) << ','
        << format_number(rows[i].corrected.cutoff) << ',' << args.degradation.downsample_factor
        << ',' << format_number(args.degradation.noise_sigma) << '\n';
    ++result.processed;
  }
  if (!csv) throw IoError("write failed: manifest.csv");
  finish(result, n);
  return result;
}

CommandResult cmd_evaluate(const fs::path& ref_dir, const fs::path& test_dir,
                           const fs::path& out_csv, ColorMode mode, const RunContext& ctx) {
  CommandResult result;
  const auto refs = list_images(ref_dir);
  if (refs.empty()) throw IoError("no images in " + ref_dir.string());
  require_dir(test_dir);
  const int n = static_cast<int>(refs.size());
  std::vector<QualityReport> reports(n);
  const auto errors = for_each_item(n, [&](int i) {
    const fs::path test = test_dir / refs[i].filename();
    if (!fs::exists(test)) throw IoError("missing in test directory");
    reports[i] = evaluate_quality(read_image(refs[i]), read_image(test), mode);
  });
  if (out_csv.has_parent_path()) make_dirs(out_csv.parent_path());
  auto csv = open_out(out_csv);
  csv << "file,psnr_db,ssim\n";
  double psnr_sum = 0.0, ssim_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const std::string name = refs[i].filename().string();
    if (!errors[i].empty()) {
      result.problems.push_back(name + ": " + errors[i]);
      warn(ctx, result.problems.back());
      continue;
    }
    csv << name << ',' << format_number(reports[i].psnr_db) << ','
        << format_number(reports[i].ssim) << '\n';
    psnr_sum += reports[i].psnr_db;
    ssim_sum += reports[i].ssim;
    ++result.processed;
  }
  if (result.processed > 0) {
    csv << "mean," << format_number(psnr_sum / result.processed) << ','
        << format_number(ssim_sum / result.processed) << '\n';
  }
  if (!csv) throw IoError("write failed: " + out_csv.string());
  finish(result, n);
  return result;
}

namespace {

void export_pair(const fs::path& dir, const std::string& id, const Image& hr, const Image& lr,
                 const nlohmann::json& meta) {
  write_png(hr, dir / (id + "_hr.png"));
  write_png(lr, dir / (id + "_lr.png"));
  write_json(meta, dir / (id + ".json"));
}

}  // namespace

CommandResult cmd_simulate(const nlohmann::json& config, const fs::path& out_dir,
                           const RunContext& ctx) {
  CommandResult result;
  nlohmann::json cfg_json = config;
  if (!cfg_json.contains("seed")) cfg_json["seed"] = ctx.seed;
  const std::string kind = cfg_json.value("experiment", "distance");
  make_dirs(out_dir);
  char id[32];
  try {
    if (kind == "distance") {
      const auto cfg = cfg_json.get<DistanceSweepConfig>();
      std::vector<CapturePair> pairs;
      const auto rows = distance_sweep(cfg, &pairs);
      auto csv = open_out(out_dir / "sweep.csv");
      csv << "id,distance_mm,focal_length_mm,pixel_pitch_um,true_cutoff,estimated_cutoff,confidence\n";
      for (std::size_t i = 0; i < rows.size(); ++i) {
        std::snprintf(id, sizeof id, "dist_%02zu", i);
        const auto& r = rows[i];
        export_pair(out_dir, id, pairs[i].hr.image, pairs[i].matched_lr,
                    {{"true_cutoff", r.true_cutoff},
                     {"distance_mm", r.distance_mm},
                     {"hr_distance_mm", cfg.hr_distance_mm}});
        csv << id << ',' << format_number(r.distance_mm) << ','
            << format_number(r.camera.focal_length_mm) << ',' << format_number(r.camera.pixel_pitch_um)
            << ',' << format_number(r.true_cutoff) << ',' << format_number(r.estimated_cutoff) << ','
            << format_number(r.confidence) << '\n';
        ++result.processed;
      }
      if (!csv) throw IoError("write failed: sweep.csv");
    } else if (kind == "learning") {
      const auto cfg = cfg_json.get<LearningSweepConfig>();
      const auto pairs = learning_sweep(cfg);
      auto csv = open_out(out_dir / "sweep.csv");
      csv << "id,distance_mm,focal_length_mm,pixel_pitch_um,true_cutoff\n";
      for (const auto& p : pairs) {
        export_pair(out_dir, p.pair.id, p.pair.hr, p.pair.lr,
                    {{"true_cutoff", p.true_cutoff}, {"distance_mm", p.distance_mm}});
        csv << p.pair.id << ',' << format_number(p.distance_mm) << ','
            << format_number(cfg.camera.focal_length_mm) << ','
            << format_number(cfg.camera.pixel_pitch_um) << ',' << format_number(p.true_cutoff)
            << '\n';
        ++result.processed;
      }
      if (!csv) throw IoError("write failed: sweep.csv");
    } else {
      throw ConfigError("unknown experiment '" + kind + "' (distance, learning)");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("simulate config: ") + e.what());
  }
  info(ctx, "exported " + std::to_string(result.processed) + " pairs to " + out_dir.string());
  return result;
}

CommandResult cmd_alpha_beta(const AlphaBetaConfig& config, const fs::path& out_json,
                             const RunContext& ctx) {
  CommandResult result;
  const AlphaBetaReport report = alpha_beta_experiment(config);
  if (out_json.has_parent_path()) make_dirs(out_json.parent_path());
  write_json(to_json(report), out_json);
  info(ctx, "alpha " + format_number(report.alpha) + ", beta " + format_number(report.beta) +
                ", gap " + format_number(report.relative_gap));
  result.processed = 1;
  return result;
}

}  // namespace fadm
