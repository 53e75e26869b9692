#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>

#include "rii/milp.hpp"

namespace rii {

enum class RegionQueryStatus { ok, empty, inconclusive };

// Orthotope hull of the region from per-coordinate MILP extremes.
// Unbounded directions are +-inf entries.
struct CoordinateIntervals {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  int dim() const { return static_cast<int>(lower.size()); }
};

struct CoordinateIntervalResult {
  RegionQueryStatus status = RegionQueryStatus::ok;
  double lower = 0.0;  // -inf when the minimize solve is unbounded
  double upper = 0.0;
  long nodes_explored = 0;
};

// Two MILP solves (min and max of theta_coord), both through the Big-M
// escalation loop. An empty region is a distinct outcome, not an interval.
CoordinateIntervalResult coordinate_interval(const RegionSpec& region, int coord,
                                             long node_limit = 2'000'000);

struct AllIntervalsResult {
  RegionQueryStatus status = RegionQueryStatus::ok;
  CoordinateIntervals box;
  long nodes_explored = 0;
};

// 2d solves; short-circuits to empty on the first infeasible coordinate.
AllIntervalsResult all_coordinate_intervals(const RegionSpec& region,
                                            long node_limit = 2'000'000);

struct TestVerdict {
  enum class Result { rejected, not_rejected, inconclusive };
  Result result = Result::not_rejected;
  double alpha = 0.0;
  double b = 0.0;
  std::optional<Eigen::VectorXd> witness;  // feasible theta when not rejected
  long nodes_explored = 0;
};

// Feasibility MILP with zero objective. Rejection (= region proven empty)
// carries the p-value alpha; a node-limited search is inconclusive, never
// a rejection.
TestVerdict hypothesis_test(const RegionSpec& region, long node_limit = 2'000'000);

struct RobustResult {
  Eigen::VectorXd w;
  double worst_value = 0.0;
};

// min over w in [w_lower, w_upper] of max over theta in the box of
// w' cost_matrix theta. The inner max separates per coordinate, so the
// epigraph reformulation is a plain LP. Every box coordinate must be
// finite.
RobustResult robust_minimax_box(const CoordinateIntervals& box,
                                const Eigen::MatrixXd& cost_matrix,
                                const Eigen::VectorXd& w_lower,
                                const Eigen::VectorXd& w_upper);

std::string intervals_to_json(const AllIntervalsResult& result);
std::string verdict_to_json(const TestVerdict& verdict);
void write_intervals_csv(std::ostream& out, const CoordinateIntervals& box);

}  // namespace rii
