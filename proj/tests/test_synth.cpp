#include <doctest.h>

#include <cmath>

#include "rii/synth.hpp"

namespace {

rii::GroundTruth truth_with(rii::NoiseKind kind, int d = 2) {
  rii::GroundTruth t;
  t.theta_star = rii::sample_theta_star(d, 5);
  t.noise.kind = kind;
  return t;
}

}  // namespace

TEST_CASE("sample_dataset is deterministic in the seed and lives in the unit box") {
  const auto truth = truth_with(rii::NoiseKind::additive_gaussian);
  const auto a = rii::sample_dataset(truth, 200, 7);
  const auto b = rii::sample_dataset(truth, 200, 7);
  const auto c = rii::sample_dataset(truth, 200, 8);
  CHECK(a.x == b.x);
  CHECK(a.y == b.y);
  CHECK(a.x != c.x);
  CHECK(a.x.minCoeff() >= 0.0);
  CHECK(a.x.maxCoeff() <= 1.0);
}

TEST_CASE("additive noise has the configured standard deviation") {
  auto truth = truth_with(rii::NoiseKind::additive_gaussian);
  truth.noise.sigma = 0.5;
  const auto data = rii::sample_dataset(truth, 20000, 11);
  const Eigen::VectorXd resid = data.y - data.x * truth.theta_star;
  CHECK(std::abs(resid.mean()) < 0.02);
  const double sd = std::sqrt(resid.squaredNorm() / resid.size() - resid.mean() * resid.mean());
  CHECK(sd == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("multiplicative noise scales with the clean signal") {
  const auto truth = truth_with(rii::NoiseKind::multiplicative_gaussian);
  const auto data = rii::sample_dataset(truth, 20000, 13);
  const Eigen::VectorXd clean = data.x * truth.theta_star;
  const Eigen::VectorXd resid = data.y - clean;

  // Split at the median |signal|; the noisy half must be visibly noisier.
  std::vector<double> mags(clean.size());
  for (int i = 0; i < clean.size(); ++i) mags[i] = std::abs(clean(i));
  std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
  const double med = mags[mags.size() / 2];
  double lo_ss = 0.0, hi_ss = 0.0;
  long lo_n = 0, hi_n = 0;
  for (int i = 0; i < clean.size(); ++i) {
    if (std::abs(clean(i)) < med) { lo_ss += resid(i) * resid(i); ++lo_n; }
    else { hi_ss += resid(i) * resid(i); ++hi_n; }
  }
  CHECK(hi_ss / hi_n > 1.5 * (lo_ss / lo_n));
}

TEST_CASE("outlier noise contaminates roughly p_outlier of the points") {
  auto truth = truth_with(rii::NoiseKind::outliers);
  const auto data = rii::sample_dataset(truth, 20000, 17);
  const Eigen::VectorXd resid = data.y - data.x * truth.theta_star;
  // sigma_lo = 0.05, sigma_hi = 10: |r| > 1 essentially only for outliers,
  // and an outlier clears 1 with probability ~0.92.
  long big = 0;
  for (int i = 0; i < resid.size(); ++i)
    if (std::abs(resid(i)) > 1.0) ++big;
  const double frac = static_cast<double>(big) / resid.size();
  CHECK(frac > 0.06);
  CHECK(frac < 0.13);
}

TEST_CASE("sin-perturbed model adds the documented nonlinearity") {
  // Zero theta* under multiplicative noise silences both the linear part
  // and the noise, isolating the sine term.
  rii::GroundTruth truth;
  truth.theta_star = Eigen::VectorXd::Zero(2);
  truth.noise.kind = rii::NoiseKind::multiplicative_gaussian;
  truth.v_star = 3.0;
  const auto data = rii::sample_dataset(truth, 500, 19);
  for (int i = 0; i < 5; ++i) {
    const double expected = data.x.row(i).dot(truth.theta_star) +
                            truth.v_star * std::sin(rii::kSinFrequency * data.x.row(i).norm());
    CHECK(data.y(i) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("sample_theta_star is standard normal per coordinate") {
  const auto t1 = rii::sample_theta_star(5, 23);
  const auto t2 = rii::sample_theta_star(5, 23);
  CHECK(t1 == t2);
  Eigen::VectorXd big(2000);
  for (int i = 0; i < 200; ++i)
    big.segment(i * 10, 10) = rii::sample_theta_star(10, 1000 + i);
  CHECK(std::abs(big.mean()) < 0.08);
  CHECK(big.squaredNorm() / big.size() == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("estimate_b_bar") {
  const auto exact = rii::estimate_b_bar(0.0, 3, 10000, 1);
  CHECK(exact.value == 0.5);
  CHECK(exact.std_error == 0.0);

  const auto small = rii::estimate_b_bar(0.05, 3, 200000, 2);
  CHECK(small.value > 0.45);
  CHECK(small.value < 0.5);
  CHECK(small.std_error < 1e-3);

  const auto large = rii::estimate_b_bar(1.0, 3, 200000, 3);
  CHECK(large.value < small.value);  // stronger nonlinearity, smaller margin

  const auto rep = rii::estimate_b_bar(0.05, 3, 50000, 9);
  CHECK(rep.value == rii::estimate_b_bar(0.05, 3, 50000, 9).value);
}

TEST_CASE("noise validation") {
  rii::NoiseSpec bad;
  bad.sigma = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  rii::NoiseSpec badp;
  badp.kind = rii::NoiseKind::outliers;
  badp.p_outlier = 1.5;
  CHECK_THROWS_AS(badp.validate(), std::invalid_argument);
}

TEST_CASE("ground_truth_to_json names the noise kind") {
  const auto truth = truth_with(rii::NoiseKind::outliers);
  const auto text = rii::ground_truth_to_json(truth);
  CHECK(text.find("outliers") != std::string::npos);
  CHECK(text.find("theta_star") != std::string::npos);
}
