#include "rii/synth.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

#include "rii/rng.hpp"

namespace rii {

namespace {
constexpr std::uint64_t kStreamData = 0x44415441;   // "DATA"
constexpr std::uint64_t kStreamTheta = 0x54485441;  // "THTA"
constexpr std::uint64_t kStreamBbar = 0x42424152;   // "BBAR"

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }
}  // namespace

void NoiseSpec::validate() const {
  if (kind == NoiseKind::additive_gaussian && !(sigma > 0.0))
    throw std::invalid_argument("NoiseSpec: sigma must be positive");
  if (kind == NoiseKind::outliers) {
    if (!(p_outlier > 0.0 && p_outlier < 1.0))
      throw std::invalid_argument("NoiseSpec: p_outlier must lie in (0, 1)");
    if (!(sigma_hi > 0.0 && sigma_lo > 0.0))
      throw std::invalid_argument("NoiseSpec: outlier sigmas must be positive");
  }
}

Dataset sample_dataset(const GroundTruth& truth, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("sample_dataset: n must be >= 1");
  truth.noise.validate();
  const int d = truth.dim();

  auto rng = make_rng(seed, kStreamData);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Eigen::MatrixXd x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = unif(rng);

  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    const double mean = truth.theta_star.dot(x.row(i));
    double eps = 0.0;
    switch (truth.noise.kind) {
      case NoiseKind::additive_gaussian:
        eps = truth.noise.sigma * gauss(rng);
        break;
      case NoiseKind::multiplicative_gaussian: {
        // Gaussian scale must be nonnegative; |theta*'x| keeps the
        // conditional median at zero either way.
        const double scale = std::abs(mean);
        eps = scale > 0.0 ? scale * gauss(rng) : 0.0;
        break;
      }
      case NoiseKind::outliers: {
        const bool hi = unif(rng) < truth.noise.p_outlier;
        eps = (hi ? truth.noise.sigma_hi : truth.noise.sigma_lo) * gauss(rng);
        break;
      }
    }
    double val = mean + eps;
    if (truth.v_star != 0.0) val += truth.v_star * std::sin(kSinFrequency * x.row(i).norm());
    y(i) = val;
  }
  return make_dataset(std::move(x), std::move(y));
}

Eigen::VectorXd sample_theta_star(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("sample_theta_star: d must be >= 1");
  auto rng = make_rng(seed, kStreamTheta);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd theta(d);
  for (int j = 0; j < d; ++j) theta(j) = gauss(rng);
  return theta;
}

BBarEstimate estimate_b_bar(double v_star, int d, long n_mc, std::uint64_t seed,
                            double noise_sigma) {
  if (n_mc < 10'000) throw std::invalid_argument("estimate_b_bar: n_mc must be >= 1e4");
  if (!(noise_sigma > 0.0)) throw std::invalid_argument("estimate_b_bar: sigma must be positive");
  if (v_star == 0.0) return {0.5, 0.0};  // symmetric noise, exact

  auto rng = make_rng(seed, kStreamBbar);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double sum = 0.0, sum_sq = 0.0;
  Eigen::VectorXd x(d);
  for (long t = 0; t < n_mc; ++t) {
    for (int j = 0; j < d; ++j) x(j) = unif(rng);
    const double m = v_star * std::sin(kSinFrequency * x.norm());
    const double v = normal_cdf(-std::abs(m) / noise_sigma);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(n_mc);
  const double mean = sum / n;
  const double var = std::max(0.0, sum_sq / n - mean * mean);
  return {mean, std::sqrt(var / n)};
}

std::string ground_truth_to_json(const GroundTruth& truth) {
  nlohmann::json theta = nlohmann::json::array();
  for (int j = 0; j < truth.dim(); ++j) theta.push_back(truth.theta_star(j));
  const char* kind = truth.noise.kind == NoiseKind::additive_gaussian ? "additive_gaussian"
                     : truth.noise.kind == NoiseKind::multiplicative_gaussian
                         ? "multiplicative_gaussian"
                         : "outliers";
  nlohmann::json doc = {{"theta_star", theta},
                        {"v_star", truth.v_star},
                        {"noise",
                         {{"kind", kind},
                          {"sigma", truth.noise.sigma},
                          {"p_outlier", truth.noise.p_outlier},
                          {"sigma_hi", truth.noise.sigma_hi},
                          {"sigma_lo", truth.noise.sigma_lo}}}};
  return doc.dump(2);
}

}  // namespace rii
