#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

#include "rii/applications.hpp"

namespace {

// Exact 1-d oracle: with x_i > 0, theta hits interval i iff theta lies in
// [lo_i / x_i, hi_i / x_i]. The hit count is piecewise constant with
// breakpoints at those ends, so scanning the endpoints gives the exact
// extremes of { theta : C(theta) >= k }.
struct SweepResult {
  bool nonempty = false;
  double lo = 0.0, hi = 0.0;
};

SweepResult sweep_oracle(const rii::RegionSpec& region) {
  const int n = region.n_te();
  std::vector<std::pair<double, double>> bands(n);
  for (int i = 0; i < n; ++i) {
    const double xi = region.intervals.x(i, 0);
    bands[i] = {region.intervals.lo(i) / xi, region.intervals.hi(i) / xi};
  }
  std::vector<double> ends;
  for (const auto& [a, b] : bands) {
    ends.push_back(a);
    ends.push_back(b);
  }
  std::sort(ends.begin(), ends.end());

  SweepResult out;
  for (const double t : ends) {
    int hits = 0;
    for (const auto& [a, b] : bands)
      if (t >= a && t <= b) ++hits;
    if (hits >= region.k) {
      if (!out.nonempty) {
        out.nonempty = true;
        out.lo = out.hi = t;
      } else {
        out.lo = std::min(out.lo, t);
        out.hi = std::max(out.hi, t);
      }
    }
  }
  return out;
}

rii::RegionSpec random_1d_region(std::mt19937_64& rng, int n_te) {
  std::uniform_real_distribution<double> x_dist(0.5, 1.5);
  std::uniform_real_distribution<double> c_dist(-2.0, 2.0);
  std::uniform_real_distribution<double> w_dist(0.0, 1.0);
  rii::ResidualIntervalSet iv;
  iv.x.resize(n_te, 1);
  iv.lo.resize(n_te);
  iv.hi.resize(n_te);
  for (int i = 0; i < n_te; ++i) {
    iv.x(i, 0) = x_dist(rng);
    const double c = c_dist(rng);
    const double w = w_dist(rng);
    iv.lo(i) = c - w;
    iv.hi(i) = c + w;
  }
  const int k = std::uniform_int_distribution<int>(1, std::max(1, n_te / 2))(rng);
  return rii::make_region(std::move(iv), k, 0.1, 0.5, 50.0);
}

rii::RegionSpec disjoint_region() {
  // Two incompatible point demands with k = 2: provably empty.
  rii::ResidualIntervalSet iv;
  iv.x = Eigen::MatrixXd::Ones(2, 1);
  iv.lo = Eigen::VectorXd(2);
  iv.hi = Eigen::VectorXd(2);
  iv.lo << 0.0, 3.0;
  iv.hi << 1.0, 4.0;
  return rii::make_region(iv, 2, 0.1, 0.5, 50.0);
}

}  // namespace

TEST_CASE("coordinate_interval matches the 1-d sweep oracle") {
  std::mt19937_64 rng(31);
  for (int rep = 0; rep < 40; ++rep) {
    const int n_te = std::uniform_int_distribution<int>(2, 12)(rng);
    const auto region = random_1d_region(rng, n_te);
    const auto oracle = sweep_oracle(region);
    const auto out = rii::coordinate_interval(region, 0);
    if (!oracle.nonempty) {
      CHECK(out.status == rii::RegionQueryStatus::empty);
      continue;
    }
    REQUIRE(out.status == rii::RegionQueryStatus::ok);
    CHECK(out.lower == doctest::Approx(oracle.lo).epsilon(1e-6));
    CHECK(out.upper == doctest::Approx(oracle.hi).epsilon(1e-6));
  }
}

TEST_CASE("empty region is reported as empty, and the test rejects") {
  const auto region = disjoint_region();
  const auto iv = rii::coordinate_interval(region, 0);
  CHECK(iv.status == rii::RegionQueryStatus::empty);

  const auto verdict = rii::hypothesis_test(region);
  CHECK(verdict.result == rii::TestVerdict::Result::rejected);
  CHECK_FALSE(verdict.witness.has_value());
  CHECK(rii::verdict_to_json(verdict).find("\"rejected\": true") != std::string::npos);
}

TEST_CASE("hypothesis test produces a verified witness when feasible") {
  std::mt19937_64 rng(37);
  const auto region = random_1d_region(rng, 8);
  const auto oracle = sweep_oracle(region);
  REQUIRE(oracle.nonempty);
  const auto verdict = rii::hypothesis_test(region);
  CHECK(verdict.result == rii::TestVerdict::Result::not_rejected);
  REQUIRE(verdict.witness.has_value());
  CHECK(rii::membership(region, *verdict.witness));
}

TEST_CASE("k < d produces unbounded coordinate intervals") {
  rii::ResidualIntervalSet iv;
  iv.x = Eigen::MatrixXd(3, 2);
  iv.x << 1.0, 0.5, -0.5, 1.0, 0.3, -1.0;
  iv.lo = Eigen::VectorXd::Constant(3, -1.0);
  iv.hi = Eigen::VectorXd::Constant(3, 1.0);
  const auto region = rii::make_region(iv, 1, 0.1, 0.5, 50.0);
  const auto out = rii::all_coordinate_intervals(region);
  REQUIRE(out.status == rii::RegionQueryStatus::ok);
  for (int j = 0; j < 2; ++j) {
    CHECK(out.box.lower(j) == -rii::kInf);
    CHECK(out.box.upper(j) == rii::kInf);
  }
}

TEST_CASE("node limit surfaces as inconclusive") {
  std::mt19937_64 rng(41);
  const auto region = random_1d_region(rng, 10);
  const auto out = rii::coordinate_interval(region, 0, 1);
  CHECK(out.status == rii::RegionQueryStatus::inconclusive);
}

TEST_CASE("robust_minimax_box solves the epigraph LP") {
  rii::CoordinateIntervals box;
  box.lower = Eigen::VectorXd(2);
  box.upper = Eigen::VectorXd(2);
  box.lower << 1.0, -1.0;
  box.upper << 2.0, 1.0;
  const Eigen::MatrixXd cost = Eigen::MatrixXd::Identity(2, 2);
  Eigen::VectorXd w_lo(2), w_hi(2);

  // Weights pinned to 0.5: worst case is 0.5 * 2 + 0.5 * 1 = 1.5.
  w_lo << 0.5, 0.5;
  w_hi << 0.5, 0.5;
  const auto pinned = rii::robust_minimax_box(box, cost, w_lo, w_hi);
  CHECK(pinned.worst_value == doctest::Approx(1.5));

  // Free weights in [0, 1]^2: w = 0 kills the exposure entirely.
  w_lo << 0.0, 0.0;
  w_hi << 1.0, 1.0;
  const auto free = rii::robust_minimax_box(box, cost, w_lo, w_hi);
  CHECK(free.worst_value == doctest::Approx(0.0));

  // Strictly positive floors: both weights drop to their 0.25 floor since
  // every unit of exposure costs worst-case value.
  w_lo << 0.25, 0.25;
  w_hi << 0.75, 0.75;
  const auto mixed = rii::robust_minimax_box(box, cost, w_lo, w_hi);
  CHECK(mixed.worst_value == doctest::Approx(0.25 * 2.0 + 0.25 * 1.0));

  rii::CoordinateIntervals inf_box = box;
  inf_box.upper(0) = rii::kInf;
  CHECK_THROWS_AS((void)rii::robust_minimax_box(inf_box, cost, w_lo, w_hi),
                  std::invalid_argument);
}

TEST_CASE("write_intervals_csv renders infinities literally") {
  rii::CoordinateIntervals box;
  box.lower = Eigen::VectorXd(2);
  box.upper = Eigen::VectorXd(2);
  box.lower << -rii::kInf, 0.25;
  box.upper << 1.5, rii::kInf;
  std::ostringstream out;
  rii::write_intervals_csv(out, box);
  CHECK(out.str() == "coord,lower,upper\n0,-inf,1.5\n1,0.25,inf\n");
}

TEST_CASE("intervals_to_json reports status and bounds") {
  rii::AllIntervalsResult r;
  r.status = rii::RegionQueryStatus::ok;
  r.box.lower = Eigen::VectorXd::Constant(1, -rii::kInf);
  r.box.upper = Eigen::VectorXd::Constant(1, 2.0);
  const auto text = rii::intervals_to_json(r);
  CHECK(text.find("\"ok\"") != std::string::npos);
  CHECK(text.find("-inf") != std::string::npos);

  rii::AllIntervalsResult empty;
  empty.status = rii::RegionQueryStatus::empty;
  CHECK(rii::intervals_to_json(empty).find("empty") != std::string::npos);
}
