#pragma once

#include <Eigen/Core>
#include <limits>
#include <string>
#include <vector>

namespace rii {

enum class Relation { le, ge, eq };
enum class Sense { minimize, maximize };

struct LinearConstraint {
  Eigen::VectorXd coeffs;
  Relation rel;
  double rhs;
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Mixed-integer linear program in natural form: objective over all
// variables, row constraints, per-variable bounds (+-inf allowed) and a
// binary mask. With the mask all false this is a plain LP.
struct MilpModel {
  Eigen::VectorXd objective;
  Sense sense = Sense::minimize;
  std::vector<LinearConstraint> constraints;
  std::vector<std::pair<double, double>> bounds;  // (lower, upper)
  std::vector<char> binary_mask;

  int num_vars() const { return static_cast<int>(objective.size()); }

  static MilpModel make(int num_vars, Sense sense);
  void add_constraint(const Eigen::VectorXd& coeffs, Relation rel, double rhs);
  void set_binary(int var);  // tightens bounds to [0, 1]
};

enum class SolveStatus { optimal, infeasible, unbounded, node_limit };

struct SolveOutcome {
  SolveStatus status = SolveStatus::infeasible;
  double objective_value = std::numeric_limits<double>::quiet_NaN();
  Eigen::VectorXd solution;    // valid when optimal (or node_limit with incumbent)
  bool has_incumbent = false;  // node_limit only: best-found, not proven optimal
  long nodes_explored = 0;
  double wall_time = 0.0;
};

// Solver tolerances, shared by the LP kernel and branch-and-bound.
inline constexpr double kFeasTol = 1e-7;
inline constexpr double kIntTol = 1e-6;
inline constexpr double kPivotTol = 1e-10;

// Two-phase dense-tableau primal simplex. Dantzig pricing with a Bland's
// rule fallback once the iteration count suggests cycling. Requires an
// all-false binary mask. Throws std::runtime_error on numeric breakdown.
SolveOutcome simplex_solve(const MilpModel& model);

// A known integer-feasible solution used to seed the incumbent before the
// search starts, so bound pruning bites from the first node.
struct WarmStart {
  Eigen::VectorXd solution;
};

// Depth-first branch and bound on the binary variables: most-fractional
// branching, a = 1 explored first. Returns node_limit status (with the
// incumbent, if any) when the node budget runs out. A warm start that is
// not feasible for the model is ignored.
SolveOutcome branch_and_bound(const MilpModel& model, long node_limit = 2'000'000,
                              const WarmStart* warm = nullptr);

// True when x satisfies every constraint, bound, and integrality mark of
// the model to within kFeasTol / kIntTol.
bool is_feasible(const MilpModel& model, const Eigen::VectorXd& x);

// CPLEX-style LP text dump for cross-checking against external solvers.
std::string to_lp_text(const MilpModel& model);

}  // namespace rii
