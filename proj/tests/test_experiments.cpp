#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rii/experiments.hpp"

namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / tag) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

rii::ExperimentConfig small_coverage_config() {
  rii::ExperimentConfig cfg;
  cfg.kind = rii::ExperimentKind::coverage;
  cfg.d = 2;
  cfg.n_train = 12;
  cfg.n_te = 10;
  cfg.k = 2;  // S_10(2, 0.5) = 0.989 >= 0.9
  cfg.trials = 6;
  cfg.seed = 5;
  return cfg;
}

}  // namespace

TEST_CASE("validate_config enforces the coverage guarantee") {
  auto cfg = small_coverage_config();
  CHECK_NOTHROW(rii::validate_config(cfg));

  cfg.k = 9;  // S_10(9, 0.5) ~ 0.011: guarantee void
  CHECK_THROWS_AS(rii::validate_config(cfg), std::invalid_argument);

  cfg = small_coverage_config();
  cfg.kind = rii::ExperimentKind::widths;
  cfg.k = 1;  // k < d: region unbounded, widths meaningless
  CHECK_THROWS_AS(rii::validate_config(cfg), std::invalid_argument);

  cfg = small_coverage_config();
  cfg.n_train = 1;
  CHECK_THROWS_AS(rii::validate_config(cfg), std::invalid_argument);
}

TEST_CASE("config JSON round-trips") {
  auto cfg = small_coverage_config();
  cfg.kind = rii::ExperimentKind::reject;
  cfg.v_star = 0.05;
  cfg.predictor = rii::PredictorKind::huber;
  cfg.noise.kind = rii::NoiseKind::outliers;
  cfg.resample_theta = false;

  const auto doc = rii::config_to_json(cfg);
  const auto back = rii::config_from_json(doc);
  CHECK(back.kind == cfg.kind);
  CHECK(back.d == cfg.d);
  CHECK(back.n_te == cfg.n_te);
  CHECK(back.k == cfg.k);
  CHECK(back.v_star == cfg.v_star);
  CHECK(back.predictor == cfg.predictor);
  CHECK(back.noise.kind == cfg.noise.kind);
  CHECK(back.resample_theta == cfg.resample_theta);
  CHECK(back.seed == cfg.seed);

  CHECK_THROWS(rii::config_from_json(nlohmann::json{{"experiment", "nope"}}));
}

TEST_CASE("runs are reproducible byte-for-byte and thread-count invariant") {
  TempDir dir_a("rii_exp_a"), dir_b("rii_exp_b"), dir_c("rii_exp_c");
  auto cfg = small_coverage_config();
  cfg.threads = 1;
  rii::run_experiment(cfg, dir_a.path.string());
  rii::run_experiment(cfg, dir_b.path.string());
  cfg.threads = 3;
  rii::run_experiment(cfg, dir_c.path.string());

  const auto rel = fs::path("coverage_seed5") / "summary.json";
  const auto a = slurp(dir_a.path / rel);
  CHECK(a == slurp(dir_b.path / rel));
  CHECK(a == slurp(dir_c.path / rel));
  CHECK(a.find("empirical_coverage") != std::string::npos);
  CHECK(a.find("guaranteed_coverage") != std::string::npos);
}

TEST_CASE("coverage summary reports the guarantee next to the empirical rate") {
  TempDir dir("rii_exp_cov");
  auto cfg = small_coverage_config();
  cfg.trials = 20;
  const auto summary = rii::run_experiment(cfg, dir.path.string());
  CHECK(summary["target_coverage"].get<double>() == doctest::Approx(0.9));
  CHECK(summary["guaranteed_coverage"].get<double>() == doctest::Approx(0.9892578125));
  const double cov = summary["empirical_coverage"].get<double>();
  CHECK(cov >= 0.0);
  CHECK(cov <= 1.0);
  CHECK(fs::exists(dir.path / "coverage_seed5" / "trials.csv"));

  // Header names one width column per coordinate.
  std::ifstream csv(dir.path / "coverage_seed5" / "trials.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header ==
        "trial,covered,rejected,empty,inconclusive,width_mean,width1,width2,solve_nodes,"
        "wall_time");
}

TEST_CASE("widths experiment fills the width columns") {
  TempDir dir("rii_exp_w");
  rii::ExperimentConfig cfg;
  cfg.kind = rii::ExperimentKind::widths;
  cfg.d = 1;
  cfg.n_train = 10;
  cfg.n_te = 8;
  cfg.k = 3;
  cfg.b = 0.5;
  cfg.alpha = 0.2;  // S_8(3, 0.5) = 0.855 clears 1 - alpha = 0.8
  cfg.trials = 4;
  cfg.seed = 9;
  const auto summary = rii::run_experiment(cfg, dir.path.string());
  CHECK(summary["width_trials"].get<long>() + summary["empty_region_trials"].get<long>() +
            summary["inconclusive_trials"].get<long>() ==
        4);
  if (summary.contains("mean_interval_width"))
    CHECK(summary["mean_interval_width"].get<double>() >= 0.0);
}

TEST_CASE("reject experiment reports a rejection rate") {
  TempDir dir("rii_exp_r");
  rii::ExperimentConfig cfg;
  cfg.kind = rii::ExperimentKind::reject;
  cfg.d = 2;
  cfg.n_train = 12;
  cfg.n_te = 10;
  cfg.k = 2;
  cfg.v_star = 0.05;
  cfg.trials = 5;
  cfg.seed = 3;
  const auto summary = rii::run_experiment(cfg, dir.path.string());
  REQUIRE(summary.contains("rejection_rate"));
  const double rate = summary["rejection_rate"].get<double>();
  CHECK(rate >= 0.0);
  CHECK(rate <= 1.0);
}

TEST_CASE("figure1 run writes the full curve grid") {
  TempDir dir("rii_exp_f");
  rii::ExperimentConfig cfg;
  cfg.kind = rii::ExperimentKind::figure1;
  cfg.n_te = 30;
  cfg.seed = 1;
  const auto summary = rii::run_experiment(cfg, dir.path.string());
  CHECK(summary["rows"].get<int>() == 4 * 51);
  const auto csv = slurp(dir.path / "figure1_seed1" / "figure1.csv");
  CHECK(csv.rfind("k,b,coverage", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4 * 51 + 1);
}

TEST_CASE("timing run reports the three timing means") {
  TempDir dir("rii_exp_t");
  rii::ExperimentConfig cfg;
  cfg.kind = rii::ExperimentKind::timing;
  cfg.d = 2;
  cfg.n_train = 12;
  cfg.n_te = 10;
  cfg.k = 2;
  cfg.trials = 1;
  cfg.seed = 2;
  const auto summary = rii::run_experiment(cfg, dir.path.string());
  CHECK(summary["mean_instantiation_time"].get<double>() > 0.0);
  CHECK(summary["mean_membership_time_1e4"].get<double>() > 0.0);
  CHECK(summary["mean_solve_time"].get<double>() >= 0.0);
}
