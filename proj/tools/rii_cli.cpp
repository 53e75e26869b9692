// Command-line front door: region construction from CSV data, membership
// and interval queries, hypothesis tests, coverage curves, and experiment
// runs.
//
// Exit codes: 0 ok/member, 1 non-member, 2 input error, 3 infeasible
// configuration (n_te too small for the requested confidence), 4 empty
// region, 5 resource limit hit.

#include <CLI11.hpp>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "rii/applications.hpp"
#include "rii/coverage.hpp"
#include "rii/estimators.hpp"
#include "rii/experiments.hpp"
#include "rii/milp.hpp"
#include "rii/region.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNonMember = 1;
constexpr int kExitInput = 2;
constexpr int kExitInfeasibleConfig = 3;
constexpr int kExitEmptyRegion = 4;
constexpr int kExitResourceLimit = 5;

[[noreturn]] void fail(int code, const std::string& category, const std::string& msg) {
  std::cerr << "error:" << category << ": " << msg << std::endl;
  std::exit(code);
}

Eigen::VectorXd parse_theta(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      vals.push_back(std::stod(tok));
    } catch (const std::exception&) {
      fail(kExitInput, "input", "cannot parse theta component '" + tok + "'");
    }
  }
  Eigen::VectorXd theta(vals.size());
  for (std::size_t i = 0; i < vals.size(); ++i) theta(static_cast<int>(i)) = vals[i];
  return theta;
}

struct RegionFlags {
  std::string data_path, out_path;
  int n_te = 0;
  double alpha = 0.1, b = 0.5;
  int k = 0;  // 0 = derive via k_alpha
  double big_m = 0.0;  // 0 = data-scaled default
  std::uint64_t seed = 0;
  std::string predictor = "ols";
  double huber_delta = 1.345;
};

int cmd_region(const RegionFlags& f) {
  rii::Dataset data;
  try {
    std::ifstream in(f.data_path);
    if (!in) fail(kExitInput, "input", "cannot open " + f.data_path);
    data = rii::read_dataset_csv(in);
  } catch (const std::exception& e) {
    fail(kExitInput, "input", e.what());
  }
  if (f.n_te < 1 || f.n_te > data.n())
    fail(kExitInput, "input", "n-te must lie in [1, number of rows]");

  int k = f.k;
  if (k == 0) {
    const auto ka = rii::k_alpha(f.n_te, f.alpha, f.b);
    if (!ka)
      fail(kExitInfeasibleConfig, "config",
           "no threshold k attains the requested confidence; increase n-te or alpha");
    k = *ka;
  }

  try {
    auto [test, train] = rii::split_dataset(data, f.n_te, f.seed);
    rii::FeatureMap map;
    rii::LinearFit fit;
    if (f.predictor == "ols") {
      fit = rii::fit_ols(train);
    } else if (f.predictor == "huber") {
      fit = rii::fit_huber(train, f.huber_delta);
    } else if (f.predictor == "feature-map-ols") {
      map.kind = rii::FeatureKind::sin_norm;
      fit = rii::fit_ols(rii::Dataset{map.apply(train.x), train.y});
    } else {
      fail(kExitInput, "input", "unknown predictor '" + f.predictor + "'");
    }
    auto intervals = rii::residual_intervals(test, rii::predict(fit, map, test.x));
    const double big_m = f.big_m > 0.0 ? f.big_m : rii::default_big_m(intervals);
    const auto region = rii::make_region(std::move(intervals), k, f.alpha, f.b, big_m);
    rii::save_region(f.out_path, region);
    std::cout << "region written to " << f.out_path << "\n"
              << "k=" << k << " n_te=" << f.n_te << " big_m=" << big_m
              << " guaranteed_coverage=" << std::setprecision(10)
              << rii::binomial_tail(f.n_te, k, f.b) << std::endl;
  } catch (const std::exception& e) {
    fail(kExitInput, "input", e.what());
  }
  return kExitOk;
}

int cmd_member(const std::string& region_path, const std::string& theta_text) {
  rii::RegionSpec region = [&] {
    try {
      return rii::load_region(region_path);
    } catch (const std::exception& e) {
      fail(kExitInput, "input", e.what());
    }
  }();
  const Eigen::VectorXd theta = parse_theta(theta_text);
  if (theta.size() != region.dim())
    fail(kExitInput, "input", "theta has dimension " + std::to_string(theta.size()) +
                                  ", region expects " + std::to_string(region.dim()));
  const int hits = rii::count_hits(region.intervals, theta);
  const bool member = hits >= region.k;
  std::cout << "C(theta)=" << hits << " k=" << region.k << " verdict="
            << (member ? "member" : "non-member") << std::endl;
  return member ? kExitOk : kExitNonMember;
}

int cmd_intervals(const std::string& region_path, const std::string& out_path,
                  long node_limit) {
  rii::RegionSpec region = [&] {
    try {
      return rii::load_region(region_path);
    } catch (const std::exception& e) {
      fail(kExitInput, "input", e.what());
    }
  }();
  const auto result = rii::all_coordinate_intervals(region, node_limit);
  if (result.status == rii::RegionQueryStatus::empty) {
    std::ostringstream msg;
    msg << "region empty: null hypothesis rejected at alpha=" << region.alpha;
    std::cerr << msg.str() << std::endl;
    return kExitEmptyRegion;
  }
  if (result.status == rii::RegionQueryStatus::inconclusive) {
    std::ofstream out(out_path);
    out << "incomplete\n";
    std::cerr << "error:limit: node limit exhausted before all intervals solved" << std::endl;
    return kExitResourceLimit;
  }
  std::ofstream out(out_path);
  if (!out) fail(kExitInput, "input", "cannot open output " + out_path);
  rii::write_intervals_csv(out, result.box);
  std::cout << "intervals written to " << out_path << std::endl;
  return kExitOk;
}

int cmd_test(const std::string& region_path, long node_limit) {
  rii::RegionSpec region = [&] {
    try {
      return rii::load_region(region_path);
    } catch (const std::exception& e) {
      fail(kExitInput, "input", e.what());
    }
  }();
  const auto verdict = rii::hypothesis_test(region, node_limit);
  std::cout << rii::verdict_to_json(verdict) << std::endl;
  switch (verdict.result) {
    case rii::TestVerdict::Result::rejected: return kExitEmptyRegion;
    case rii::TestVerdict::Result::inconclusive: return kExitResourceLimit;
    case rii::TestVerdict::Result::not_rejected: return kExitOk;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-sample confidence regions for linear regression from residual intervals"};
  app.require_subcommand(1);

  RegionFlags rf;
  auto* region = app.add_subcommand("region", "Build a confidence region from CSV data");
  region->add_option("--data", rf.data_path, "Input CSV (header x1,...,xd,y)")->required();
  region->add_option("--out", rf.out_path, "Output region JSON path")->required();
  region->add_option("--n-te", rf.n_te, "Test split size")->required();
  region->add_option("--alpha", rf.alpha, "Confidence level (default 0.1)");
  region->add_option("--b", rf.b, "Noise tolerance in (0, 0.5] (default 0.5)");
  region->add_option("--k", rf.k, "Explicit hit threshold (default: derive from alpha)");
  region->add_option("--big-m", rf.big_m, "Big-M constant (default: data-scaled)");
  region->add_option("--seed", rf.seed, "Split seed (default 0)");
  region->add_option("--predictor", rf.predictor, "ols | huber | feature-map-ols");
  region->add_option("--huber-delta", rf.huber_delta, "Huber loss threshold (default 1.345)");

  std::string member_region, member_theta;
  auto* member = app.add_subcommand("member", "Test membership of a parameter vector");
  member->add_option("--region", member_region, "Region JSON file")->required();
  member->add_option("--theta", member_theta, "Comma-separated parameter vector")->required();

  std::string iv_region, iv_out;
  long iv_nodes = 2'000'000;
  auto* intervals = app.add_subcommand("intervals", "Coordinate confidence intervals");
  intervals->add_option("--region", iv_region, "Region JSON file")->required();
  intervals->add_option("--out", iv_out, "Output CSV path")->required();
  intervals->add_option("--node-limit", iv_nodes, "Branch-and-bound node budget");

  std::string test_region;
  long test_nodes = 2'000'000;
  auto* test = app.add_subcommand("test", "Linearity hypothesis test (region emptiness)");
  test->add_option("--region", test_region, "Region JSON file")->required();
  test->add_option("--node-limit", test_nodes, "Branch-and-bound node budget");

  int cc_n_te = 30;
  std::vector<int> cc_ks = {4, 8, 12, 16};
  double cc_bmin = 0.0, cc_bmax = 0.5;
  int cc_count = 51;
  std::string cc_out;
  auto* curve = app.add_subcommand("coverage-curve", "Guaranteed-coverage curve CSV");
  curve->add_option("--n-te", cc_n_te, "Test size (default 30)");
  curve->add_option("--k-list", cc_ks, "Thresholds (default 4 8 12 16)");
  curve->add_option("--b-min", cc_bmin, "Grid start (default 0)");
  curve->add_option("--b-max", cc_bmax, "Grid end (default 0.5)");
  curve->add_option("--b-count", cc_count, "Grid points (default 51)");
  curve->add_option("--out", cc_out, "Output CSV path")->required();

  std::string exp_config, exp_out = "runs";
  auto* experiment = app.add_subcommand("experiment", "Run a synthetic experiment");
  experiment->add_option("--config", exp_config, "Experiment config JSON")->required();
  experiment->add_option("--out", exp_out, "Run directory root (default runs/)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error:input: " << e.what() << std::endl;
    return kExitInput;
  }

  try {
    if (*region) return cmd_region(rf);
    if (*member) return cmd_member(member_region, member_theta);
    if (*intervals) return cmd_intervals(iv_region, iv_out, iv_nodes);
    if (*test) return cmd_test(test_region, test_nodes);
    if (*curve) {
      if (cc_count < 2 || cc_bmax < cc_bmin) fail(kExitInput, "input", "bad b grid");
      std::vector<double> grid(cc_count);
      for (int i = 0; i < cc_count; ++i)
        grid[i] = cc_bmin + (cc_bmax - cc_bmin) * i / (cc_count - 1);
      const auto cells = rii::coverage_curve(cc_n_te, cc_ks, grid);
      std::ofstream out(cc_out);
      if (!out) fail(kExitInput, "input", "cannot open output " + cc_out);
      rii::write_coverage_csv(out, cells);
      std::cout << "curve written to " << cc_out << std::endl;
      return kExitOk;
    }
    if (*experiment) {
      const auto cfg = rii::load_config(exp_config);
      const auto summary = rii::run_experiment(cfg, exp_out);
      std::cout << summary.dump(2) << std::endl;
      return kExitOk;
    }
  } catch (const std::invalid_argument& e) {
    fail(kExitInput, "input", e.what());
  } catch (const std::exception& e) {
    fail(kExitInput, "runtime", e.what());
  }
  return kExitOk;
}
