#pragma once

#include <optional>
#include <ostream>
#include <vector>

namespace rii {

// Binomial-tail arithmetic behind the coverage guarantee.
//
// S(n, k, b) = sum_{j=k}^{n} C(n,j) b^j (1-b)^{n-j} is the guaranteed
// coverage of a region built with hit threshold k over n test points when
// each residual interval covers with probability at least b.

struct CoverageParams {
  int n_te;
  int k;
  double b;
  double alpha;
};

// Upper binomial tail P[Bin(n_te, b) >= k]. Exact summation via a
// multiplicative pmf recurrence seeded in log space; absolute error is
// well under 1e-12 for n_te <= 1e4. Throws std::invalid_argument on
// k outside [0, n_te] or b outside [0, 1].
double binomial_tail(int n_te, int k, double b);

// Largest k in [1, n_te] with S(n_te, k, b) >= 1 - alpha, or nullopt when
// even k = 1 fails (n_te too small for the requested confidence).
std::optional<int> k_alpha(int n_te, double alpha, double b);

struct CoverageCell {
  int k;
  double b;
  double coverage;
};

// One row per (k, b) pair; rows for a fixed k are nondecreasing in b.
std::vector<CoverageCell> coverage_curve(int n_te, const std::vector<int>& k_list,
                                         const std::vector<double>& b_grid);

// CSV with header "k,b,coverage", floats at 10 significant digits.
void write_coverage_csv(std::ostream& out, const std::vector<CoverageCell>& cells);

// Wilson 95% score interval for an empirical proportion; used by the
// experiment harness when reporting Monte-Carlo rates.
struct WilsonInterval {
  double lower;
  double upper;
};
WilsonInterval wilson_interval(long hits, long trials);

}  // namespace rii
