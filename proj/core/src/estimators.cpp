#include "rii/estimators.hpp"

#include <Eigen/QR>
#include <cmath>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace rii {

Eigen::MatrixXd FeatureMap::apply(const Eigen::MatrixXd& x) const {
  if (kind == FeatureKind::identity) return x;
  Eigen::MatrixXd out(x.rows(), x.cols() + 1);
  out.leftCols(x.cols()) = x;
  for (int i = 0; i < x.rows(); ++i)
    out(i, x.cols()) = std::sin(frequency * x.row(i).norm());
  return out;
}

namespace {

Eigen::VectorXd qr_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& y,
                         const char* who) {
  if (a.rows() < a.cols())
    throw std::invalid_argument(std::string(who) + ": fewer samples than features");
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  if (qr.rank() < a.cols())
    throw std::invalid_argument(std::string(who) + ": rank-deficient design matrix");
  return qr.solve(y);
}

}  // namespace

LinearFit fit_ols(const Dataset& train) {
  return {qr_solve(train.x, train.y, "fit_ols"), true};
}

double huber_objective(const Dataset& data, const Eigen::VectorXd& theta, double delta) {
  const Eigen::VectorXd r = data.y - data.x * theta;
  double obj = 0.0;
  for (int i = 0; i < r.size(); ++i) {
    const double a = std::abs(r(i));
    obj += a <= delta ? 0.5 * a * a : delta * (a - 0.5 * delta);
  }
  return obj;
}

LinearFit fit_huber(const Dataset& train, double delta, int max_iter, double tol) {
  if (delta <= 0.0) throw std::invalid_argument("fit_huber: delta must be positive");
  Eigen::VectorXd theta = qr_solve(train.x, train.y, "fit_huber");

  const int n = train.n();
  for (int it = 0; it < max_iter; ++it) {
    // Weighted least squares with Huber weights w = min(1, delta / |r|).
    Eigen::VectorXd w(n);
    const Eigen::VectorXd r = train.y - train.x * theta;
    for (int i = 0; i < n; ++i) {
      const double a = std::abs(r(i));
      w(i) = a <= delta ? 1.0 : delta / a;
    }
    const Eigen::VectorXd sw = w.cwiseSqrt();
    const Eigen::MatrixXd xw = sw.asDiagonal() * train.x;
    const Eigen::VectorXd yw = sw.cwiseProduct(train.y);
    const Eigen::VectorXd next = qr_solve(xw, yw, "fit_huber");
    const double change = (next - theta).cwiseAbs().maxCoeff();
    theta = next;
    if (change < tol) return {theta, true};
  }
  return {theta, false};
}

PredictionSet predict(const LinearFit& fit, const FeatureMap& map, const Eigen::MatrixXd& x_te) {
  const Eigen::MatrixXd phi = map.apply(x_te);
  if (phi.cols() != fit.coefficients.size())
    throw std::invalid_argument("predict: fit dimension != mapped feature dimension");
  return {phi * fit.coefficients};
}

std::string fit_to_json(const LinearFit& fit, const FeatureMap& map) {
  nlohmann::json coeffs = nlohmann::json::array();
  for (int i = 0; i < fit.coefficients.size(); ++i) coeffs.push_back(fit.coefficients(i));
  nlohmann::json doc = {
      {"coefficients", coeffs},
      {"map_kind", map.kind == FeatureKind::identity ? "identity" : "sin_norm"},
      {"frequency", map.frequency}};
  return doc.dump(2);
}

}  // namespace rii
