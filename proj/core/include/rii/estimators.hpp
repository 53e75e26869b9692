#pragma once

#include <Eigen/Core>
#include <string>

#include "rii/data.hpp"

namespace rii {

// Through-origin linear fit; the regression model carries no intercept.
struct LinearFit {
  Eigen::VectorXd coefficients;
  bool converged = true;  // IRLS only; OLS always true
};

enum class FeatureKind { identity, sin_norm };

// identity: phi(x) = x. sin_norm: phi(x) = (x, sin(frequency * ||x||_2)).
struct FeatureMap {
  FeatureKind kind = FeatureKind::identity;
  double frequency = 8.0 * 3.14159265358979323846;

  int mapped_dim(int d) const { return kind == FeatureKind::identity ? d : d + 1; }
  Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
};

// Least squares via column-pivoted QR; throws on a rank-deficient design.
LinearFit fit_ols(const Dataset& train);

// Huber-loss fit by iteratively reweighted least squares. delta defaults to
// the classical 1.345. Non-convergence within max_iter is flagged on the
// result, not an error.
LinearFit fit_huber(const Dataset& train, double delta = 1.345, int max_iter = 100,
                    double tol = 1e-8);

// y_hat_i = coefficients . phi(x_i).
PredictionSet predict(const LinearFit& fit, const FeatureMap& map, const Eigen::MatrixXd& x_te);

// JSON {coefficients, map_kind, frequency}.
std::string fit_to_json(const LinearFit& fit, const FeatureMap& map);

// Huber objective value, exposed for the IRLS monotonicity property.
double huber_objective(const Dataset& data, const Eigen::VectorXd& theta, double delta);

}  // namespace rii
