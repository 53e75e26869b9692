#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>

#include "rii/data.hpp"

namespace rii {

enum class NoiseKind { additive_gaussian, multiplicative_gaussian, outliers };

// additive_gaussian: eps ~ N(0, sigma), sigma = 0.5 by default.
// multiplicative_gaussian: eps ~ N(0, |theta*'x|); exactly 0 where theta*'x = 0.
// outliers: N(0, sigma_hi) with probability p_outlier, else N(0, sigma_lo).
// All N(mu, s) read s as a standard deviation.
struct NoiseSpec {
  NoiseKind kind = NoiseKind::additive_gaussian;
  double sigma = 0.5;
  double p_outlier = 0.1;
  double sigma_hi = 10.0;
  double sigma_lo = 0.05;

  void validate() const;
};

// y = theta_star'x + v_star * sin(8*pi*||x||_2) + noise; v_star = 0 for the
// purely linear cases. The sin-perturbed model uses unit Gaussian noise.
struct GroundTruth {
  Eigen::VectorXd theta_star;
  double v_star = 0.0;
  NoiseSpec noise;

  int dim() const { return static_cast<int>(theta_star.size()); }
};

inline constexpr double kSinFrequency = 8.0 * 3.14159265358979323846;

// x_ij ~ Uniform[0,1] iid; deterministic given seed.
Dataset sample_dataset(const GroundTruth& truth, int n, std::uint64_t seed);

// Each coordinate standard normal.
Eigen::VectorXd sample_theta_star(int d, std::uint64_t seed);

struct BBarEstimate {
  double value;
  double std_error;
};

// Monte-Carlo estimate of E_X[ d_eps(X) ] for the sin-perturbed model with
// unit Gaussian noise: the inner probability is the closed form
// Phi(-|v_star * sin(8*pi*||X||_2)| / sigma).
BBarEstimate estimate_b_bar(double v_star, int d, long n_mc, std::uint64_t seed,
                            double noise_sigma = 1.0);

std::string ground_truth_to_json(const GroundTruth& truth);

}  // namespace rii
