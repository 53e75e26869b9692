#include "rii/milp.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace rii {

namespace {

// LP-guided construction of an integer-feasible starting point: take the
// relaxation's theta, treat its hit set as the active points, and re-solve
// a theta-only LP restricted to those intervals. Repeating once or twice
// lets the hit set settle. Anything found is verified against the full
// model before being used, so a failed heuristic costs nothing.
std::optional<WarmStart> region_warm_start(const RegionSpec& region, const MilpModel& model) {
  const int d = region.dim();
  const int n_te = region.n_te();

  MilpModel relaxed = model;
  std::fill(relaxed.binary_mask.begin(), relaxed.binary_mask.end(), 0);
  const SolveOutcome root = simplex_solve(relaxed);
  if (root.status != SolveStatus::optimal) return std::nullopt;

  std::optional<WarmStart> best;
  double best_value = 0.0;
  const double obj_sign = model.sense == Sense::maximize ? -1.0 : 1.0;

  Eigen::VectorXd theta = root.solution.head(d);
  for (int pass = 0; pass < 3; ++pass) {
    const Eigen::VectorXd proj = region.intervals.x * theta;

    // Active set: the k points whose intervals are nearest to the current
    // projections (distance zero for genuine hits).
    std::vector<double> dist(n_te);
    for (int i = 0; i < n_te; ++i)
      dist[i] = std::max({0.0, region.intervals.lo(i) - proj(i), proj(i) - region.intervals.hi(i)});
    std::vector<int> order(n_te);
    std::iota(order.begin(), order.end(), 0);
    std::nth_element(order.begin(), order.begin() + (region.k - 1), order.end(),
                     [&](int a, int b) { return dist[a] < dist[b]; });

    MilpModel sub = MilpModel::make(d, model.sense);
    sub.objective = model.objective.head(d);
    for (int idx = 0; idx < region.k; ++idx) {
      const int i = order[idx];
      const Eigen::VectorXd xi = region.intervals.x.row(i).transpose();
      sub.add_constraint(xi, Relation::ge, region.intervals.lo(i));
      sub.add_constraint(xi, Relation::le, region.intervals.hi(i));
    }
    const SolveOutcome fit = simplex_solve(sub);
    if (fit.status != SolveStatus::optimal) break;
    theta = fit.solution;

    Eigen::VectorXd full(d + n_te);
    full.head(d) = theta;
    const Eigen::VectorXd proj2 = region.intervals.x * theta;
    for (int i = 0; i < n_te; ++i) {
      const bool hit = proj2(i) >= region.intervals.lo(i) - kFeasTol &&
                       proj2(i) <= region.intervals.hi(i) + kFeasTol;
      full(d + i) = hit ? 1.0 : 0.0;
    }
    if (!is_feasible(model, full)) continue;
    const double value = obj_sign * model.objective.dot(full);
    if (!best || value < best_value) {
      best = WarmStart{std::move(full)};
      best_value = value;
    }
  }
  return best;
}

}  // namespace

MilpModel encode_region(const RegionSpec& region, const Eigen::VectorXd& objective_theta,
                        Sense sense) {
  const int d = region.dim();
  const int n_te = region.n_te();
  if (objective_theta.size() != d)
    throw std::invalid_argument("encode_region: objective length must equal d");

  MilpModel model = MilpModel::make(d + n_te, sense);
  model.objective.head(d) = objective_theta;
  for (int i = 0; i < n_te; ++i) model.set_binary(d + i);

  const double big_m = region.big_m;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(d + n_te);

  // Cardinality: sum a_i >= k.
  row.tail(n_te).setOnes();
  model.add_constraint(row, Relation::ge, static_cast<double>(region.k));

  // Per point: theta'x_i - M a_i >= lo_i - M  and  theta'x_i + M a_i <= hi_i + M.
  for (int i = 0; i < n_te; ++i) {
    row.setZero();
    row.head(d) = region.intervals.x.row(i).transpose();
    row(d + i) = -big_m;
    model.add_constraint(row, Relation::ge, region.intervals.lo(i) - big_m);
    row(d + i) = big_m;
    model.add_constraint(row, Relation::le, region.intervals.hi(i) + big_m);
  }
  return model;
}

bool verify_big_m(const SolveOutcome& outcome, const RegionSpec& region) {
  if (outcome.status != SolveStatus::optimal)
    throw std::invalid_argument("verify_big_m: outcome must be optimal");
  const int d = region.dim();
  const double margin = 1e-6 * region.big_m;
  const Eigen::VectorXd theta = outcome.solution.head(d);
  const Eigen::VectorXd proj = region.intervals.x * theta;
  for (int i = 0; i < region.n_te(); ++i) {
    if (outcome.solution(d + i) > 0.5) continue;  // active point, constraint is exact
    const double relaxed_lo = region.intervals.lo(i) - region.big_m;
    const double relaxed_hi = region.intervals.hi(i) + region.big_m;
    if (!(proj(i) >= relaxed_lo + margin && proj(i) <= relaxed_hi - margin)) return false;
  }
  return true;
}

RegionSolve solve_region_objective(const RegionSpec& region,
                                   const Eigen::VectorXd& objective_theta, Sense sense,
                                   long node_limit) {
  RegionSolve result;
  RegionSpec working = region;
  constexpr int kMaxEscalations = 3;
  for (int attempt = 0;; ++attempt) {
    const MilpModel model = encode_region(working, objective_theta, sense);
    const auto warm = region_warm_start(working, model);
    result.outcome = branch_and_bound(model, node_limit, warm ? &*warm : nullptr);
    result.big_m_used = working.big_m;
    result.escalations = attempt;
    if (result.outcome.status != SolveStatus::optimal) return result;
    result.big_m_verified = verify_big_m(result.outcome, working);
    if (result.big_m_verified || attempt == kMaxEscalations) return result;
    working.big_m *= 10.0;
  }
}

}  // namespace rii
