#pragma once

#include "rii/lp.hpp"
#include "rii/region.hpp"

namespace rii {

// Big-M MILP over (theta, a): d free continuous variables followed by
// n_te binary activators. Constraints are exactly the cardinality row
// sum(a) >= k plus, per test point, the pair
//   lo_i - (1 - a_i) M <= theta'x_i <= hi_i + (1 - a_i) M.
MilpModel encode_region(const RegionSpec& region, const Eigen::VectorXd& objective_theta,
                        Sense sense);

// Post-solve check that every deactivated point (a_i = 0) sits strictly
// inside its M-relaxed band by a margin of 1e-6 * M. False means M was too
// small and the caller should grow it and re-solve.
bool verify_big_m(const SolveOutcome& outcome, const RegionSpec& region);

struct RegionSolve {
  SolveOutcome outcome;
  double big_m_used = 0.0;
  int escalations = 0;
  bool big_m_verified = false;
};

// Solve min/max of objective_theta over the region, wrapped in the M
// escalation loop (x10 per retry, at most 3 escalations).
RegionSolve solve_region_objective(const RegionSpec& region,
                                   const Eigen::VectorXd& objective_theta, Sense sense,
                                   long node_limit = 2'000'000);

}  // namespace rii
