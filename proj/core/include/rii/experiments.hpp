#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "rii/synth.hpp"

namespace rii {

enum class ExperimentKind {
  coverage,
  widths,
  bounds,
  reject,
  nonlinear_coverage,
  figure1,
  timing
};

enum class PredictorKind { ols, huber, feature_map_ols };

// Full description of a synthetic experiment run. (k, n_te, alpha, b) must
// satisfy S(n_te, k, b) >= 1 - alpha; validation rejects configs whose
// guarantee would be silently void.
struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::coverage;
  int d = 3;
  int n_train = 60;
  int n_te = 39;
  int k = 16;
  double alpha = 0.1;
  double b = 0.5;
  NoiseSpec noise;
  double v_star = 0.0;
  PredictorKind predictor = PredictorKind::ols;
  int trials = 100;
  std::uint64_t seed = 0;
  bool resample_theta = true;
  double big_m = 50.0;
  long node_limit = 2'000'000;
  double huber_delta = 1.345;
  int threads = 0;  // 0 = hardware concurrency
};

void validate_config(const ExperimentConfig& cfg);

nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::string& path);

// One row per trial; only the fields relevant to the experiment kind are
// populated.
struct TrialRecord {
  int trial = 0;
  std::optional<bool> covered;
  std::optional<bool> rejected;
  std::optional<Eigen::VectorXd> widths;
  bool empty_region = false;
  bool inconclusive = false;
  long solve_nodes = 0;
  double wall_time = 0.0;
  double instantiation_time = 0.0;  // timing kind only
  double membership_time = 0.0;     // timing kind only
};

// Runs the experiment, writes <out_dir>/<kind>_seed<seed>/{trials.csv,
// summary.json} and returns the summary document. Trials fan out across
// worker threads with per-trial RNG streams; the summary is deterministic
// in (config, seed) and carries no wall-clock fields except for the timing
// kind.
nlohmann::json run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

std::string experiment_kind_name(ExperimentKind kind);

}  // namespace rii
