#pragma once

// Batch commands behind the `fadm` executable. Each command reads and writes
// files only through its arguments, processes items in parallel and emits
// results in sorted item order, so output bytes do not depend on the
// thread count.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fadm/degradation.hpp"
#include "fadm/metrics.hpp"
#include "fadm/optics.hpp"
#include "fadm/predictor.hpp"
#include "fadm/simulator.hpp"
#include "fadm/transfer.hpp"

namespace fadm {

enum ExitCode : int { kExitOk = 0, kExitPartial = 1, kExitConfig = 2, kExitIo = 3 };

struct RunContext {
  std::uint64_t seed = 0;
  int jobs = 0;  // 0: OpenMP default
  bool verbose = false;
  std::ostream* log = nullptr;  // progress and warnings; null discards
};

struct CommandResult {
  int exit_code = kExitOk;
  int processed = 0;
  std::vector<std::string> problems;  // one entry per skipped item
};

namespace fs = std::filesystem;

struct PairEntry {
  std::string id;
  fs::path hr;
  fs::path lr;
  std::optional<fs::path> sidecar;  // <id>.json with "true_cutoff"
};

struct PairListing {
  std::vector<PairEntry> pairs;     // sorted by id
  std::vector<std::string> unmatched;  // files that have no partner
};

/// Pairs `<id>_hr.png` with `<id>_lr.png` (also .pgm/.ppm). Throws IoError
/// if the directory is missing.
PairListing list_pairs(const fs::path& dir);

/// Images (.png/.pgm/.ppm) in a directory, sorted by file name.
std::vector<fs::path> list_images(const fs::path& dir);

/// Writes estimates.csv plus `<id>_profile.csv` / `<id>_profile.png`.
CommandResult cmd_estimate(const fs::path& pairs_dir, const fs::path& out_dir,
                           const EstimateOptions& opts, const RunContext& ctx);

CommandResult cmd_build_trainset(const fs::path& pairs_dir, const fs::path& out_json,
                                 const TrainingOptions& opts, const RunContext& ctx);

struct TrainArgs {
  std::optional<fs::path> pairs_dir;
  std::optional<fs::path> trainset;
  fs::path out;
  double lambda = 1.0;
  std::string camera;
  TrainingOptions training;
};

CommandResult cmd_train_predictor(const TrainArgs& args, const RunContext& ctx);

struct PredictArgs {
  fs::path model;
  fs::path image;
  std::optional<CameraSpec> source;
  std::optional<CameraSpec> target;
  std::optional<fs::path> out;  // JSON file
  std::ostream* print = nullptr;  // JSON is also written here when set
};

CommandResult cmd_predict(const PredictArgs& args, const RunContext& ctx);

struct SynthesizeArgs {
  fs::path hr_dir;
  fs::path model;
  CameraSpec source;
  CameraSpec target;
  fs::path out_dir;
  DegradationConfig degradation;  // cutoff is replaced per image
};

/// out/HR, out/LR (PNG + JSON sidecar) and out/manifest.csv.
CommandResult cmd_synthesize(const SynthesizeArgs& args, const RunContext& ctx);

/// Per-image rows and a final mean row; files matched by name.
CommandResult cmd_evaluate(const fs::path& ref_dir, const fs::path& test_dir,
                           const fs::path& out_csv, ColorMode mode, const RunContext& ctx);

/// Runs a simulator experiment described by a JSON config:
///   {"experiment": "distance", ...DistanceSweepConfig}
///   {"experiment": "learning", ...LearningSweepConfig}
/// and exports `<id>_hr.png`, `<id>_lr.png`, `<id>.json` plus sweep.csv.
CommandResult cmd_simulate(const nlohmann::json& config, const fs::path& out_dir,
                           const RunContext& ctx);

CommandResult cmd_alpha_beta(const AlphaBetaConfig& config, const fs::path& out_json,
                             const RunContext& ctx);

/// Shortest round-trip decimal form used in every CSV.
std::string format_number(double v);

}  // namespace fadm
