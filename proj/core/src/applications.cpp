#include "rii/applications.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <ostream>
#include <iomanip>
#include <stdexcept>

namespace rii {

namespace {

// Maps one directional solve onto an interval end. An optimum that never
// passes Big-M verification is pinned to the relaxed band, which moves with
// every escalation: the true region is unbounded in that direction.
enum class EndState { ok, empty, inconclusive };

EndState interval_end(const RegionSolve& solve, double unbounded_value, double& end) {
  switch (solve.outcome.status) {
    case SolveStatus::infeasible: return EndState::empty;
    case SolveStatus::node_limit: return EndState::inconclusive;
    case SolveStatus::unbounded: end = unbounded_value; return EndState::ok;
    case SolveStatus::optimal:
      end = solve.big_m_verified ? solve.outcome.objective_value : unbounded_value;
      return EndState::ok;
  }
  return EndState::ok;
}

// A feasibility vertex generically sits exactly on interval boundaries, so
// within solver tolerance it can land just outside the closed region. Push
// the point to the max-margin center of the bands the solver activated; a
// strictly interior point survives the exact containment count.
Eigen::VectorXd recenter_witness(const RegionSpec& region, const Eigen::VectorXd& milp_solution) {
  const int d = region.dim();
  const int n = region.n_te();
  auto lp = MilpModel::make(d + 1, Sense::maximize);
  lp.objective(d) = 1.0;  // the margin t
  for (int j = 0; j < d; ++j) lp.bounds[j] = {-kInf, kInf};
  lp.bounds[d] = {-1.0, 1.0};
  Eigen::VectorXd row(d + 1);
  for (int i = 0; i < n; ++i) {
    if (milp_solution(d + i) < 0.5) continue;
    row.head(d) = region.intervals.x.row(i).transpose();
    row(d) = -1.0;
    lp.add_constraint(row, Relation::ge, region.intervals.lo(i));
    row(d) = 1.0;
    lp.add_constraint(row, Relation::le, region.intervals.hi(i));
  }
  const SolveOutcome centered = simplex_solve(lp);
  if (centered.status != SolveStatus::optimal) return milp_solution.head(d);
  return centered.solution.head(d);
}

}  // namespace

CoordinateIntervalResult coordinate_interval(const RegionSpec& region, int coord,
                                             long node_limit) {
  if (coord < 0 || coord >= region.dim())
    throw std::invalid_argument("coordinate_interval: coord out of range");

  CoordinateIntervalResult out;

  // Cheap necessary-condition screen: with k < d or a rank-deficient design
  // the region is empty or unbounded, so one feasibility solve settles it.
  if (boundedness_necessary_check(region) == BoundednessVerdict::surely_unbounded_or_empty) {
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(region.dim());
    const RegionSolve feas = solve_region_objective(region, zero, Sense::minimize, node_limit);
    out.nodes_explored = feas.outcome.nodes_explored;
    if (feas.outcome.status == SolveStatus::infeasible) out.status = RegionQueryStatus::empty;
    else if (feas.outcome.status == SolveStatus::node_limit)
      out.status = RegionQueryStatus::inconclusive;
    else {
      out.lower = -kInf;
      out.upper = kInf;
    }
    return out;
  }

  Eigen::VectorXd obj = Eigen::VectorXd::Zero(region.dim());
  obj(coord) = 1.0;

  const RegionSolve lo = solve_region_objective(region, obj, Sense::minimize, node_limit);
  out.nodes_explored += lo.outcome.nodes_explored;
  switch (interval_end(lo, -kInf, out.lower)) {
    case EndState::empty: out.status = RegionQueryStatus::empty; return out;
    case EndState::inconclusive: out.status = RegionQueryStatus::inconclusive; return out;
    case EndState::ok: break;
  }

  const RegionSolve hi = solve_region_objective(region, obj, Sense::maximize, node_limit);
  out.nodes_explored += hi.outcome.nodes_explored;
  switch (interval_end(hi, kInf, out.upper)) {
    case EndState::empty: out.status = RegionQueryStatus::empty; return out;
    case EndState::inconclusive: out.status = RegionQueryStatus::inconclusive; return out;
    case EndState::ok: break;
  }
  return out;
}

AllIntervalsResult all_coordinate_intervals(const RegionSpec& region, long node_limit) {
  AllIntervalsResult out;
  const int d = region.dim();
  out.box.lower.resize(d);
  out.box.upper.resize(d);
  for (int j = 0; j < d; ++j) {
    const CoordinateIntervalResult r = coordinate_interval(region, j, node_limit);
    out.nodes_explored += r.nodes_explored;
    if (r.status != RegionQueryStatus::ok) {
      out.status = r.status;
      return out;
    }
    out.box.lower(j) = r.lower;
    out.box.upper(j) = r.upper;
  }
  return out;
}

TestVerdict hypothesis_test(const RegionSpec& region, long node_limit) {
  TestVerdict verdict;
  verdict.alpha = region.alpha;
  verdict.b = region.b;

  const Eigen::VectorXd zero_obj = Eigen::VectorXd::Zero(region.dim());
  const RegionSolve solve = solve_region_objective(region, zero_obj, Sense::minimize, node_limit);
  verdict.nodes_explored = solve.outcome.nodes_explored;

  switch (solve.outcome.status) {
    case SolveStatus::infeasible:
      verdict.result = TestVerdict::Result::rejected;
      break;
    case SolveStatus::node_limit:
      verdict.result = TestVerdict::Result::inconclusive;
      break;
    case SolveStatus::unbounded:
      // Cannot happen with a zero objective; treat defensively as feasible
      // without a witness.
      verdict.result = TestVerdict::Result::not_rejected;
      break;
    case SolveStatus::optimal: {
      verdict.result = TestVerdict::Result::not_rejected;
      Eigen::VectorXd theta = solve.outcome.solution.head(region.dim());
      if (!membership(region, theta)) theta = recenter_witness(region, solve.outcome.solution);
      // Degenerate regions have no interior, so even a centered point can
      // fail the exact count; feasibility-to-tolerance stands, the witness
      // is simply withheld.
      if (membership(region, theta)) verdict.witness = theta;
      break;
    }
  }
  return verdict;
}

RobustResult robust_minimax_box(const CoordinateIntervals& box,
                                const Eigen::MatrixXd& cost_matrix,
                                const Eigen::VectorXd& w_lower,
                                const Eigen::VectorXd& w_upper) {
  const int d = box.dim();
  const int dw = static_cast<int>(w_lower.size());
  if (cost_matrix.rows() != dw || cost_matrix.cols() != d)
    throw std::invalid_argument("robust_minimax_box: cost matrix shape mismatch");
  if (w_upper.size() != dw)
    throw std::invalid_argument("robust_minimax_box: w bounds length mismatch");
  for (int j = 0; j < d; ++j)
    if (!std::isfinite(box.lower(j)) || !std::isfinite(box.upper(j)))
      throw std::invalid_argument("robust_minimax_box: box must be finite in every coordinate");

  // Variables [w (dw), t (d)]; inner max over theta_j in [lo_j, hi_j] of
  // g_j theta_j with g = C'w becomes t_j >= g_j lo_j and t_j >= g_j hi_j.
  MilpModel lp = MilpModel::make(dw + d, Sense::minimize);
  lp.objective.tail(d).setOnes();
  for (int j = 0; j < dw; ++j) lp.bounds[j] = {w_lower(j), w_upper(j)};

  Eigen::VectorXd row(dw + d);
  for (int j = 0; j < d; ++j) {
    for (const double end : {box.lower(j), box.upper(j)}) {
      row.setZero();
      row.head(dw) = -end * cost_matrix.col(j);
      row(dw + j) = 1.0;
      lp.add_constraint(row, Relation::ge, 0.0);  // t_j - end * (C'w)_j >= 0
    }
  }

  const SolveOutcome outcome = simplex_solve(lp);
  if (outcome.status != SolveStatus::optimal)
    throw std::runtime_error("robust_minimax_box: LP not optimal");
  return {outcome.solution.head(dw), outcome.objective_value};
}

namespace {
nlohmann::json bound_to_json(double v) {
  if (v == kInf) return "inf";
  if (v == -kInf) return "-inf";
  return v;
}
}  // namespace

std::string intervals_to_json(const AllIntervalsResult& result) {
  nlohmann::json doc;
  doc["status"] = result.status == RegionQueryStatus::ok ? "ok"
                  : result.status == RegionQueryStatus::empty ? "empty"
                                                              : "inconclusive";
  doc["nodes_explored"] = result.nodes_explored;
  if (result.status == RegionQueryStatus::ok) {
    nlohmann::json lower = nlohmann::json::array(), upper = nlohmann::json::array();
    for (int j = 0; j < result.box.dim(); ++j) {
      lower.push_back(bound_to_json(result.box.lower(j)));
      upper.push_back(bound_to_json(result.box.upper(j)));
    }
    doc["lower"] = lower;
    doc["upper"] = upper;
  }
  return doc.dump(2);
}

std::string verdict_to_json(const TestVerdict& verdict) {
  nlohmann::json doc;
  doc["result"] = verdict.result == TestVerdict::Result::rejected ? "rejected"
                  : verdict.result == TestVerdict::Result::not_rejected ? "not_rejected"
                                                                        : "inconclusive";
  doc["rejected"] = verdict.result == TestVerdict::Result::rejected;
  doc["alpha"] = verdict.alpha;
  doc["b"] = verdict.b;
  doc["nodes_explored"] = verdict.nodes_explored;
  if (verdict.witness) {
    nlohmann::json w = nlohmann::json::array();
    for (int j = 0; j < verdict.witness->size(); ++j) w.push_back((*verdict.witness)(j));
    doc["witness"] = w;
  }
  return doc.dump(2);
}

void write_intervals_csv(std::ostream& out, const CoordinateIntervals& box) {
  out << "coord,lower,upper\n" << std::setprecision(10);
  for (int j = 0; j < box.dim(); ++j) {
    out << j << ',';
    if (box.lower(j) == -kInf) out << "-inf";
    else out << box.lower(j);
    out << ',';
    if (box.upper(j) == kInf) out << "inf";
    else out << box.upper(j);
    out << '\n';
  }
}

}  // namespace rii
