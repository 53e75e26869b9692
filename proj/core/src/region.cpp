#include "rii/region.hpp"

#include <Eigen/QR>
#include <fstream>
#include <nlohmann/json.hpp>
#include <stdexcept>

namespace rii {

using nlohmann::json;

ResidualIntervalSet residual_intervals(const Dataset& test, const PredictionSet& preds) {
  if (test.n() != preds.y_hat.size())
    throw std::invalid_argument("residual_intervals: prediction length mismatch");
  if (!preds.y_hat.allFinite())
    throw std::invalid_argument("residual_intervals: non-finite prediction");

  ResidualIntervalSet out;
  out.x = test.x;
  out.lo = test.y.cwiseMin(preds.y_hat);
  out.hi = test.y.cwiseMax(preds.y_hat);
  return out;
}

RegionSpec make_region(ResidualIntervalSet intervals, int k, double alpha, double b,
                       double big_m) {
  const int n_te = intervals.size();
  if (intervals.x.rows() != n_te || intervals.hi.size() != n_te)
    throw std::invalid_argument("RegionSpec: interval fields disagree on n_te");
  if (!intervals.x.allFinite() || !intervals.lo.allFinite() || !intervals.hi.allFinite())
    throw std::invalid_argument("RegionSpec: non-finite interval data");
  for (int i = 0; i < n_te; ++i)
    if (intervals.lo(i) > intervals.hi(i))
      throw std::invalid_argument("RegionSpec: lo > hi");
  if (k < 1 || k > n_te) throw std::invalid_argument("RegionSpec: k must lie in [1, n_te]");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("RegionSpec: alpha in (0,1)");
  if (!(b >= 0.0 && b <= 0.5)) throw std::invalid_argument("RegionSpec: b in [0, 0.5]");
  const double ends = std::max(intervals.lo.cwiseAbs().maxCoeff(),
                               intervals.hi.cwiseAbs().maxCoeff());
  if (!(big_m > ends))
    throw std::invalid_argument("RegionSpec: big_m must exceed every |interval end|");
  return RegionSpec{std::move(intervals), k, alpha, b, big_m};
}

double default_big_m(const ResidualIntervalSet& intervals) {
  const double ends = std::max(intervals.lo.cwiseAbs().maxCoeff(),
                               intervals.hi.cwiseAbs().maxCoeff());
  if (ends <= 5.0) return 50.0;
  return 10.0 * std::max(ends, 1.0);
}

int count_hits(const ResidualIntervalSet& intervals, const Eigen::VectorXd& theta) {
  if (theta.size() != intervals.dim())
    throw std::invalid_argument("count_hits: theta dimension mismatch");
  const Eigen::VectorXd proj = intervals.x * theta;
  int hits = 0;
  for (int i = 0; i < intervals.size(); ++i)
    if (proj(i) >= intervals.lo(i) && proj(i) <= intervals.hi(i)) ++hits;
  return hits;
}

bool membership(const RegionSpec& region, const Eigen::VectorXd& theta) {
  return count_hits(region.intervals, theta) >= region.k;
}

BoundednessVerdict boundedness_necessary_check(const RegionSpec& region) {
  if (region.k < region.dim()) return BoundednessVerdict::surely_unbounded_or_empty;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(region.intervals.x);
  if (qr.rank() < region.dim()) return BoundednessVerdict::surely_unbounded_or_empty;
  return BoundednessVerdict::undetermined;
}

std::string region_to_json(const RegionSpec& region) {
  json points = json::array();
  for (int i = 0; i < region.n_te(); ++i) {
    json xs = json::array();
    for (int j = 0; j < region.dim(); ++j) xs.push_back(region.intervals.x(i, j));
    points.push_back({{"x", xs}, {"lo", region.intervals.lo(i)}, {"hi", region.intervals.hi(i)}});
  }
  json doc = {{"d", region.dim()},   {"n_te", region.n_te()}, {"k", region.k},
              {"alpha", region.alpha}, {"b", region.b},       {"big_m", region.big_m},
              {"points", points}};
  return doc.dump(2);
}

RegionSpec region_from_json(const std::string& text) {
  const json doc = json::parse(text);
  const int d = doc.at("d").get<int>();
  const int n_te = doc.at("n_te").get<int>();
  const auto& points = doc.at("points");
  if (static_cast<int>(points.size()) != n_te)
    throw std::invalid_argument("region json: points length != n_te");

  ResidualIntervalSet intervals;
  intervals.x.resize(n_te, d);
  intervals.lo.resize(n_te);
  intervals.hi.resize(n_te);
  for (int i = 0; i < n_te; ++i) {
    const auto& p = points[i];
    const auto& xs = p.at("x");
    if (static_cast<int>(xs.size()) != d)
      throw std::invalid_argument("region json: point dimension != d");
    for (int j = 0; j < d; ++j) intervals.x(i, j) = xs[j].get<double>();
    intervals.lo(i) = p.at("lo").get<double>();
    intervals.hi(i) = p.at("hi").get<double>();
  }
  return make_region(std::move(intervals), doc.at("k").get<int>(),
                     doc.at("alpha").get<double>(), doc.at("b").get<double>(),
                     doc.at("big_m").get<double>());
}

void save_region(const std::string& path, const RegionSpec& region) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_region: cannot open " + path);
  out << region_to_json(region) << '\n';
}

RegionSpec load_region(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_region: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return region_from_json(text);
}

}  // namespace rii
