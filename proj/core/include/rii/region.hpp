#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>

#include "rii/data.hpp"

namespace rii {

// Per-test-point residual intervals [min(y, y_hat), max(y, y_hat)] paired
// with their input rows. Containment is closed on both ends, so the
// degenerate y == y_hat interval is a single point, not empty.
struct ResidualIntervalSet {
  Eigen::MatrixXd x;   // n_te x d
  Eigen::VectorXd lo;  // length n_te
  Eigen::VectorXd hi;  // length n_te, lo[i] <= hi[i]

  int size() const { return static_cast<int>(lo.size()); }
  int dim() const { return static_cast<int>(x.cols()); }
};

ResidualIntervalSet residual_intervals(const Dataset& test, const PredictionSet& preds);

// The confidence region Theta = { theta : C(theta) >= k }, where C counts
// residual intervals containing theta'x. big_m is the relaxation constant
// for the MILP encoding.
struct RegionSpec {
  ResidualIntervalSet intervals;
  int k;
  double alpha;
  double b;
  double big_m;

  int n_te() const { return intervals.size(); }
  int dim() const { return intervals.dim(); }
};

// Validates 1 <= k <= n_te and big_m > max |interval end|.
RegionSpec make_region(ResidualIntervalSet intervals, int k, double alpha, double b,
                       double big_m);

// Data-scaled default: 50 for O(1) targets, else 10 x max(|lo|, |hi|, 1).
double default_big_m(const ResidualIntervalSet& intervals);

// C(theta): number of intervals with lo[i] <= theta'x_i <= hi[i].
int count_hits(const ResidualIntervalSet& intervals, const Eigen::VectorXd& theta);

// True iff count_hits(theta) >= k. O(n_te * d), no optimization involved.
bool membership(const RegionSpec& region, const Eigen::VectorXd& theta);

// Necessary-condition screen: k < d or rank(x) < d forces the region to be
// empty or unbounded. The sufficient condition over all size-k input
// subsets is combinatorial, so anything else stays undetermined and
// definitive unboundedness is left to the solver.
enum class BoundednessVerdict { surely_unbounded_or_empty, undetermined };
BoundednessVerdict boundedness_necessary_check(const RegionSpec& region);

// JSON document {d, n_te, k, alpha, b, big_m, points: [{x, lo, hi}]}.
// Round-trips bit-exactly for finite doubles.
std::string region_to_json(const RegionSpec& region);
RegionSpec region_from_json(const std::string& text);
void save_region(const std::string& path, const RegionSpec& region);
RegionSpec load_region(const std::string& path);

}  // namespace rii
