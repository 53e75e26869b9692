#include "rii/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rii/applications.hpp"
#include "rii/coverage.hpp"
#include "rii/estimators.hpp"
#include "rii/region.hpp"
#include "rii/rng.hpp"

namespace rii {

namespace {

const char* predictor_name(PredictorKind p) {
  switch (p) {
    case PredictorKind::ols: return "ols";
    case PredictorKind::huber: return "huber";
    case PredictorKind::feature_map_ols: return "feature_map_ols";
  }
  return "?";
}

const char* noise_name(NoiseKind k) {
  switch (k) {
    case NoiseKind::additive_gaussian: return "additive_gaussian";
    case NoiseKind::multiplicative_gaussian: return "multiplicative_gaussian";
    case NoiseKind::outliers: return "outliers";
  }
  return "?";
}

NoiseKind noise_from_name(const std::string& s) {
  if (s == "additive_gaussian") return NoiseKind::additive_gaussian;
  if (s == "multiplicative_gaussian") return NoiseKind::multiplicative_gaussian;
  if (s == "outliers") return NoiseKind::outliers;
  throw std::invalid_argument("config: unknown noise kind '" + s + "'");
}

PredictorKind predictor_from_name(const std::string& s) {
  if (s == "ols") return PredictorKind::ols;
  if (s == "huber") return PredictorKind::huber;
  if (s == "feature_map_ols") return PredictorKind::feature_map_ols;
  throw std::invalid_argument("config: unknown predictor '" + s + "'");
}

ExperimentKind kind_from_name(const std::string& s) {
  if (s == "coverage") return ExperimentKind::coverage;
  if (s == "widths") return ExperimentKind::widths;
  if (s == "bounds") return ExperimentKind::bounds;
  if (s == "reject") return ExperimentKind::reject;
  if (s == "nonlinear_coverage") return ExperimentKind::nonlinear_coverage;
  if (s == "figure1") return ExperimentKind::figure1;
  if (s == "timing") return ExperimentKind::timing;
  throw std::invalid_argument("config: unknown experiment '" + s + "'");
}

std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(trial + 1));
}

// Shared per-trial pipeline: sample, split, fit, build the region.
struct TrialContext {
  Eigen::VectorXd theta_star;
  RegionSpec region;
};

TrialContext build_trial(const ExperimentConfig& cfg, int trial) {
  const std::uint64_t ts = trial_seed(cfg.seed, trial);
  Eigen::VectorXd theta_star =
      cfg.resample_theta ? sample_theta_star(cfg.d, ts) : sample_theta_star(cfg.d, cfg.seed);

  NoiseSpec noise = cfg.noise;
  if (cfg.v_star != 0.0) noise = NoiseSpec{NoiseKind::additive_gaussian, 1.0};
  const GroundTruth truth{theta_star, cfg.v_star, noise};
  const Dataset data = sample_dataset(truth, cfg.n_train + cfg.n_te, ts);
  auto [test, train] = split_dataset(data, cfg.n_te, ts);

  FeatureMap map;
  LinearFit fit;
  switch (cfg.predictor) {
    case PredictorKind::ols:
      fit = fit_ols(train);
      break;
    case PredictorKind::huber:
      fit = fit_huber(train, cfg.huber_delta);
      break;
    case PredictorKind::feature_map_ols: {
      map.kind = FeatureKind::sin_norm;
      fit = fit_ols(Dataset{map.apply(train.x), train.y});
      break;
    }
  }
  const PredictionSet preds = predict(fit, map, test.x);
  RegionSpec region =
      make_region(residual_intervals(test, preds), cfg.k, cfg.alpha, cfg.b, cfg.big_m);
  return {std::move(theta_star), std::move(region)};
}

TrialRecord run_trial(const ExperimentConfig& cfg, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  const auto t0 = std::chrono::steady_clock::now();

  switch (cfg.kind) {
    case ExperimentKind::coverage:
    case ExperimentKind::nonlinear_coverage: {
      const TrialContext ctx = build_trial(cfg, trial);
      rec.covered = membership(ctx.region, ctx.theta_star);
      break;
    }
    case ExperimentKind::widths:
    case ExperimentKind::bounds: {
      const TrialContext ctx = build_trial(cfg, trial);
      const AllIntervalsResult r = all_coordinate_intervals(ctx.region, cfg.node_limit);
      rec.solve_nodes = r.nodes_explored;
      if (r.status == RegionQueryStatus::empty) rec.empty_region = true;
      else if (r.status == RegionQueryStatus::inconclusive) rec.inconclusive = true;
      else rec.widths = (r.box.upper - r.box.lower).eval();
      break;
    }
    case ExperimentKind::reject: {
      const TrialContext ctx = build_trial(cfg, trial);
      const TestVerdict v = hypothesis_test(ctx.region, cfg.node_limit);
      rec.solve_nodes = v.nodes_explored;
      if (v.result == TestVerdict::Result::inconclusive) rec.inconclusive = true;
      else rec.rejected = (v.result == TestVerdict::Result::rejected);
      break;
    }
    case ExperimentKind::timing: {
      const auto i0 = std::chrono::steady_clock::now();
      const TrialContext ctx = build_trial(cfg, trial);
      rec.instantiation_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - i0).count();

      const auto m0 = std::chrono::steady_clock::now();
      auto rng = make_rng(cfg.seed, 0x4d454d42, static_cast<std::uint64_t>(trial));
      std::normal_distribution<double> gauss(0.0, 1.0);
      int hits = 0;
      Eigen::VectorXd theta(cfg.d);
      for (int q = 0; q < 10'000; ++q) {
        for (int j = 0; j < cfg.d; ++j) theta(j) = gauss(rng);
        hits += membership(ctx.region, theta) ? 1 : 0;
      }
      rec.membership_time =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - m0).count();
      (void)hits;

      const CoordinateIntervalResult r = coordinate_interval(ctx.region, 0, cfg.node_limit);
      rec.solve_nodes = r.nodes_explored;
      rec.inconclusive = (r.status == RegionQueryStatus::inconclusive);
      rec.empty_region = (r.status == RegionQueryStatus::empty);
      break;
    }
    case ExperimentKind::figure1:
      break;  // handled without trials
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

void write_trials_csv(std::ostream& out, const std::vector<TrialRecord>& records, int d) {
  out << "trial,covered,rejected,empty,inconclusive,width_mean";
  for (int j = 0; j < d; ++j) out << ",width" << (j + 1);
  out << ",solve_nodes,wall_time\n";
  out << std::setprecision(10);
  for (const auto& r : records) {
    out << r.trial << ',';
    if (r.covered) out << (*r.covered ? 1 : 0);
    out << ',';
    if (r.rejected) out << (*r.rejected ? 1 : 0);
    out << ',' << (r.empty_region ? 1 : 0) << ',' << (r.inconclusive ? 1 : 0) << ',';
    if (r.widths) out << r.widths->mean();
    for (int j = 0; j < d; ++j) {
      out << ',';
      if (r.widths) out << (*r.widths)(j);
    }
    out << ',' << r.solve_nodes << ',' << r.wall_time << '\n';
  }
}

// Published baseline numbers quoted for side-by-side reading in reports;
// never recomputed here.
nlohmann::json sps_reference(ExperimentKind kind) {
  nlohmann::json ref;
  ref["note"] = "transcribed published SPS baseline values, not computed by this tool";
  if (kind == ExperimentKind::coverage) {
    ref["coverage_percent"] = {{"additive_gaussian", {{"d3", 96.8}, {"d10", 100.0}}},
                               {"multiplicative_gaussian", {{"d3", 97.2}, {"d10", 100.0}}},
                               {"outliers", {{"d3", 98.4}, {"d10", 100.0}}}};
  } else if (kind == ExperimentKind::widths) {
    ref["mean_width"] = {{"additive_gaussian", 1.230},
                         {"multiplicative_gaussian", 1.903},
                         {"outliers", 2.633}};
  }
  return ref;
}

}  // namespace

std::string experiment_kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::coverage: return "coverage";
    case ExperimentKind::widths: return "widths";
    case ExperimentKind::bounds: return "bounds";
    case ExperimentKind::reject: return "reject";
    case ExperimentKind::nonlinear_coverage: return "nonlinear_coverage";
    case ExperimentKind::figure1: return "figure1";
    case ExperimentKind::timing: return "timing";
  }
  return "?";
}

void validate_config(const ExperimentConfig& cfg) {
  if (cfg.d < 1) throw std::invalid_argument("config: d must be >= 1");
  if (cfg.trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (cfg.kind == ExperimentKind::figure1) return;
  if (cfg.n_train < cfg.d)
    throw std::invalid_argument("config: n_train must be >= d to fit a predictor");
  if (cfg.k < 1 || cfg.k > cfg.n_te)
    throw std::invalid_argument("config: k must lie in [1, n_te]");
  cfg.noise.validate();
  const double guaranteed = binomial_tail(cfg.n_te, cfg.k, cfg.b);
  if (guaranteed < 1.0 - cfg.alpha) {
    std::ostringstream msg;
    msg << "config: guaranteed coverage S(" << cfg.n_te << "," << cfg.k << "," << cfg.b
        << ") = " << guaranteed << " < 1 - alpha = " << (1.0 - cfg.alpha);
    throw std::invalid_argument(msg.str());
  }
  if ((cfg.kind == ExperimentKind::widths || cfg.kind == ExperimentKind::bounds) &&
      cfg.k < cfg.d)
    throw std::invalid_argument("config: widths/bounds need k >= d (region otherwise unbounded)");
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  return nlohmann::json{{"experiment", experiment_kind_name(cfg.kind)},
                        {"d", cfg.d},
                        {"n_train", cfg.n_train},
                        {"n_te", cfg.n_te},
                        {"k", cfg.k},
                        {"alpha", cfg.alpha},
                        {"b", cfg.b},
                        {"noise",
                         {{"kind", noise_name(cfg.noise.kind)},
                          {"sigma", cfg.noise.sigma},
                          {"p_outlier", cfg.noise.p_outlier},
                          {"sigma_hi", cfg.noise.sigma_hi},
                          {"sigma_lo", cfg.noise.sigma_lo}}},
                        {"v_star", cfg.v_star},
                        {"predictor", predictor_name(cfg.predictor)},
                        {"trials", cfg.trials},
                        {"seed", cfg.seed},
                        {"resample_theta", cfg.resample_theta},
                        {"big_m", cfg.big_m},
                        {"node_limit", cfg.node_limit},
                        {"huber_delta", cfg.huber_delta}};
}

ExperimentConfig config_from_json(const nlohmann::json& doc) {
  ExperimentConfig cfg;
  cfg.kind = kind_from_name(doc.at("experiment").get<std::string>());
  if (doc.contains("d")) cfg.d = doc["d"].get<int>();
  if (doc.contains("n_train")) cfg.n_train = doc["n_train"].get<int>();
  if (doc.contains("n_te")) cfg.n_te = doc["n_te"].get<int>();
  if (doc.contains("k")) cfg.k = doc["k"].get<int>();
  if (doc.contains("alpha")) cfg.alpha = doc["alpha"].get<double>();
  if (doc.contains("b")) cfg.b = doc["b"].get<double>();
  if (doc.contains("noise")) {
    const auto& n = doc["noise"];
    if (n.contains("kind")) cfg.noise.kind = noise_from_name(n["kind"].get<std::string>());
    if (n.contains("sigma")) cfg.noise.sigma = n["sigma"].get<double>();
    if (n.contains("p_outlier")) cfg.noise.p_outlier = n["p_outlier"].get<double>();
    if (n.contains("sigma_hi")) cfg.noise.sigma_hi = n["sigma_hi"].get<double>();
    if (n.contains("sigma_lo")) cfg.noise.sigma_lo = n["sigma_lo"].get<double>();
  }
  if (doc.contains("v_star")) cfg.v_star = doc["v_star"].get<double>();
  if (doc.contains("predictor"))
    cfg.predictor = predictor_from_name(doc["predictor"].get<std::string>());
  if (doc.contains("trials")) cfg.trials = doc["trials"].get<int>();
  if (doc.contains("seed")) cfg.seed = doc["seed"].get<std::uint64_t>();
  if (doc.contains("resample_theta")) cfg.resample_theta = doc["resample_theta"].get<bool>();
  if (doc.contains("big_m")) cfg.big_m = doc["big_m"].get<double>();
  if (doc.contains("node_limit")) cfg.node_limit = doc["node_limit"].get<long>();
  if (doc.contains("huber_delta")) cfg.huber_delta = doc["huber_delta"].get<double>();
  if (doc.contains("threads")) cfg.threads = doc["threads"].get<int>();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_config: cannot open " + path);
  nlohmann::json doc;
  in >> doc;
  return config_from_json(doc);
}

nlohmann::json run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  validate_config(cfg);

  namespace fs = std::filesystem;
  const fs::path run_dir =
      fs::path(out_dir) / (experiment_kind_name(cfg.kind) + "_seed" + std::to_string(cfg.seed));
  fs::create_directories(run_dir);

  nlohmann::json summary;
  summary["config"] = config_to_json(cfg);
  summary["guaranteed_coverage"] = cfg.kind == ExperimentKind::figure1
                                       ? nlohmann::json()
                                       : nlohmann::json(binomial_tail(cfg.n_te, cfg.k, cfg.b));
  summary["target_coverage"] = 1.0 - cfg.alpha;

  if (cfg.kind == ExperimentKind::figure1) {
    std::vector<double> grid(51);
    for (int i = 0; i < 51; ++i) grid[i] = 0.5 * i / 50.0;
    const auto cells = coverage_curve(cfg.n_te, {4, 8, 12, 16}, grid);
    std::ofstream csv(run_dir / "figure1.csv");
    write_coverage_csv(csv, cells);
    summary["rows"] = cells.size();
    summary["csv"] = (run_dir / "figure1.csv").string();
    std::ofstream sj(run_dir / "summary.json");
    sj << summary.dump(2) << '\n';
    return summary;
  }

  // Fan trials out over worker threads; record slots are indexed so the
  // aggregation below is independent of completion order.
  std::vector<TrialRecord> records(cfg.trials);
  {
    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(cfg.trials));
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    std::atomic<bool> failed{false};
    std::string error_msg;
    std::mutex error_mutex;
    for (unsigned w = 0; w < n_threads; ++w) {
      workers.emplace_back([&] {
        while (!failed.load()) {
          const int t = next.fetch_add(1);
          if (t >= cfg.trials) break;
          try {
            records[t] = run_trial(cfg, t);
          } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(error_mutex);
            error_msg = e.what();
            failed.store(true);
          }
        }
      });
    }
    for (auto& th : workers) th.join();
    if (failed.load()) throw std::runtime_error("run_experiment: trial failed: " + error_msg);
  }

  {
    std::ofstream csv(run_dir / "trials.csv");
    write_trials_csv(csv, records, cfg.d);
  }

  long covered = 0, cover_total = 0, rejected = 0, reject_total = 0;
  long empty_count = 0, inconclusive_count = 0, width_trials = 0;
  double width_sum = 0.0;
  double instantiation_sum = 0.0, membership_sum = 0.0, solve_time_sum = 0.0;
  long nodes_sum = 0;
  for (const auto& r : records) {
    if (r.covered) {
      ++cover_total;
      if (*r.covered) ++covered;
    }
    if (r.rejected) {
      ++reject_total;
      if (*r.rejected) ++rejected;
    }
    if (r.empty_region) ++empty_count;
    if (r.inconclusive) ++inconclusive_count;
    if (r.widths) {
      ++width_trials;
      width_sum += r.widths->mean();
    }
    nodes_sum += r.solve_nodes;
    instantiation_sum += r.instantiation_time;
    membership_sum += r.membership_time;
    solve_time_sum += r.wall_time;
  }

  summary["trials"] = cfg.trials;
  summary["empty_region_trials"] = empty_count;
  summary["inconclusive_trials"] = inconclusive_count;
  summary["mean_nodes"] = cfg.trials > 0 ? static_cast<double>(nodes_sum) / cfg.trials : 0.0;
  if (cover_total > 0) {
    summary["empirical_coverage"] = static_cast<double>(covered) / cover_total;
    const auto wi = wilson_interval(covered, cover_total);
    summary["coverage_wilson95"] = {wi.lower, wi.upper};
  }
  if (reject_total > 0 || cfg.kind == ExperimentKind::reject) {
    summary["rejection_rate"] =
        reject_total > 0 ? static_cast<double>(rejected) / reject_total : 0.0;
    const auto wi = wilson_interval(rejected, std::max(reject_total, 1L));
    summary["rejection_wilson95"] = {wi.lower, wi.upper};
  }
  if (cfg.kind == ExperimentKind::widths || cfg.kind == ExperimentKind::bounds) {
    if (width_trials > 0) summary["mean_interval_width"] = width_sum / width_trials;
    summary["width_trials"] = width_trials;
  }
  if (cfg.kind == ExperimentKind::timing) {
    summary["mean_instantiation_time"] = instantiation_sum / cfg.trials;
    summary["mean_membership_time_1e4"] = membership_sum / cfg.trials;
    summary["mean_solve_time"] = solve_time_sum / cfg.trials;
  }
  if (cfg.kind == ExperimentKind::coverage || cfg.kind == ExperimentKind::widths)
    summary["sps_published_reference"] = sps_reference(cfg.kind);

  std::ofstream sj(run_dir / "summary.json");
  sj << summary.dump(2) << '\n';
  return summary;
}

}  // namespace rii
