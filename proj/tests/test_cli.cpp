// Exercises the command-line binary end to end: real process spawns, real
// files, exit codes as documented. The binary path is injected at compile
// time by the build.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "rii/data.hpp"
#include "rii/region.hpp"
#include "rii/synth.hpp"

namespace {

namespace fs = std::filesystem;

const fs::path kWork = fs::temp_directory_path() / "rii_cli_work";

int run(const std::string& args) {
  const std::string cmd = std::string(RII_CLI_PATH) + " " + args + " >" +
                          (kWork / "stdout.txt").string() + " 2>" +
                          (kWork / "stderr.txt").string();
  const int raw = std::system(cmd.c_str());
  return WEXITSTATUS(raw);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string out_text() { return slurp(kWork / "stdout.txt"); }
std::string err_text() { return slurp(kWork / "stderr.txt"); }

struct Setup {
  Setup() {
    fs::remove_all(kWork);
    fs::create_directories(kWork);

    // 99-row linear dataset for the region-building paths.
    rii::GroundTruth truth;
    truth.theta_star = rii::sample_theta_star(3, 21);
    const auto data = rii::sample_dataset(truth, 99, 21);
    std::ofstream csv(kWork / "data.csv");
    rii::write_dataset_csv(csv, data);

    // Provably empty region: two incompatible demands, k = 2.
    rii::ResidualIntervalSet iv;
    iv.x = Eigen::MatrixXd::Ones(2, 1);
    iv.lo = Eigen::VectorXd(2);
    iv.hi = Eigen::VectorXd(2);
    iv.lo << 0.0, 3.0;
    iv.hi << 1.0, 4.0;
    rii::save_region((kWork / "empty_region.json").string(),
                     rii::make_region(iv, 2, 0.1, 0.5, 50.0));
  }
};

const Setup setup_once{};

std::string data_arg() { return (kWork / "data.csv").string(); }

}  // namespace

TEST_CASE("region subcommand derives k = 16 for the paper configuration") {
  const int rc = run("region --data " + data_arg() + " --out " +
                     (kWork / "region.json").string() + " --n-te 39 --alpha 0.1 --b 0.5");
  CHECK(rc == 0);
  CHECK(out_text().find("k=16") != std::string::npos);
  const auto region = rii::load_region((kWork / "region.json").string());
  CHECK(region.k == 16);
  CHECK(region.n_te() == 39);
}

TEST_CASE("region building is deterministic in the seed") {
  const auto out1 = (kWork / "r1.json").string();
  const auto out2 = (kWork / "r2.json").string();
  REQUIRE(run("region --data " + data_arg() + " --out " + out1 + " --n-te 20 --seed 4") == 0);
  REQUIRE(run("region --data " + data_arg() + " --out " + out2 + " --n-te 20 --seed 4") == 0);
  CHECK(slurp(out1) == slurp(out2));
  const auto out3 = (kWork / "r3.json").string();
  REQUIRE(run("region --data " + data_arg() + " --out " + out3 + " --n-te 20 --seed 5") == 0);
  CHECK(slurp(out1) != slurp(out3));
}

TEST_CASE("region subcommand exit codes for bad input") {
  CHECK(run("region --data /nonexistent.csv --out x.json --n-te 10") == 2);
  // n_te = 1 cannot attain 99% confidence at b = 0.5: infeasible config.
  CHECK(run("region --data " + data_arg() + " --out " + (kWork / "x.json").string() +
            " --n-te 1 --alpha 0.01") == 3);
  CHECK(err_text().find("error:config") != std::string::npos);
  CHECK(run("region --data " + data_arg() + " --out " + (kWork / "x.json").string() +
            " --n-te 500") == 2);
  CHECK(run("region --data " + data_arg() + " --out " + (kWork / "x.json").string() +
            " --n-te 20 --predictor nope") == 2);
}

TEST_CASE("member subcommand distinguishes members from outsiders") {
  // Small region solved quickly; theta inside is easiest found via the
  // region file itself: use k = 1 so the first interval's midpoint works.
  const auto path = (kWork / "member_region.json").string();
  REQUIRE(run("region --data " + data_arg() + " --out " + path + " --n-te 10 --k 1") == 0);
  const auto region = rii::load_region(path);
  // theta = 0 projects to 0 everywhere; C(0) counts intervals straddling 0.
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
  const bool zero_in = rii::membership(region, zero);
  const int rc = run("member --region " + path + " --theta 0,0,0");
  CHECK(rc == (zero_in ? 0 : 1));
  CHECK(out_text().find("C(theta)=") != std::string::npos);

  CHECK(run("member --region " + path + " --theta 1e6,1e6,1e6") == 1);
  CHECK(run("member --region " + path + " --theta 1,2") == 2);  // wrong dimension
}

TEST_CASE("intervals subcommand writes a CSV for a solvable region") {
  const auto rpath = (kWork / "iv_region.json").string();
  REQUIRE(run("region --data " + data_arg() + " --out " + rpath + " --n-te 12 --k 6") == 0);
  const auto csv = (kWork / "intervals.csv").string();
  CHECK(run("intervals --region " + rpath + " --out " + csv) == 0);
  const auto text = slurp(csv);
  CHECK(text.rfind("coord,lower,upper", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header + 3 coords
}

TEST_CASE("empty region: intervals exits 4 with the rejection message") {
  const auto rpath = (kWork / "empty_region.json").string();
  const int rc = run("intervals --region " + rpath + " --out " + (kWork / "e.csv").string());
  CHECK(rc == 4);
  CHECK(err_text().find("region empty: null hypothesis rejected at alpha=0.1") !=
        std::string::npos);
  CHECK(run("test --region " + rpath) == 4);
  CHECK(out_text().find("\"rejected\": true") != std::string::npos);
}

TEST_CASE("node limit: intervals exits 5 and leaves an incomplete marker") {
  const auto rpath = (kWork / "iv_region.json").string();
  const auto csv = (kWork / "limited.csv").string();
  const int rc = run("intervals --region " + rpath + " --out " + csv + " --node-limit 1");
  CHECK(rc == 5);
  CHECK(slurp(csv).rfind("incomplete", 0) == 0);
}

TEST_CASE("coverage-curve subcommand") {
  const auto csv = (kWork / "curve.csv").string();
  CHECK(run("coverage-curve --n-te 30 --out " + csv) == 0);
  const auto text = slurp(csv);
  CHECK(text.rfind("k,b,coverage", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4 * 51 + 1);
}

TEST_CASE("experiment subcommand runs from a config file") {
  const auto cfg = (kWork / "exp.json").string();
  {
    std::ofstream out(cfg);
    out << R"({"experiment":"coverage","d":2,"n_train":12,"n_te":10,"k":2,)"
        << R"("trials":4,"seed":6})";
  }
  const auto runs = (kWork / "runs").string();
  CHECK(run("experiment --config " + cfg + " --out " + runs) == 0);
  CHECK(fs::exists(fs::path(runs) / "coverage_seed6" / "summary.json"));
  CHECK(out_text().find("empirical_coverage") != std::string::npos);
}

TEST_CASE("unknown flags exit 2") {
  CHECK(run("region --bogus") == 2);
  CHECK(run("") == 2);
}
