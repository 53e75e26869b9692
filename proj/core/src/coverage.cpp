#include "rii/coverage.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace rii {

double binomial_tail(int n_te, int k, double b) {
  if (n_te < 0) throw std::invalid_argument("binomial_tail: n_te must be >= 0");
  if (k < 0 || k > n_te) throw std::invalid_argument("binomial_tail: k must lie in [0, n_te]");
  if (!(b >= 0.0 && b <= 1.0)) throw std::invalid_argument("binomial_tail: b must lie in [0, 1]");

  // Exact endpoints first; the recurrence divides by (1 - b).
  if (k == 0) return 1.0;
  if (b == 0.0) return 0.0;
  if (b == 1.0) return 1.0;

  // Log-space pmf seed, then a multiplicative recurrence over the smaller
  // side of the distribution. Summing the side away from the mode keeps the
  // seed from underflowing while the answer is still representable: if k is
  // below the mode, pmf(k) itself can be 0 in double precision even though
  // the tail is essentially 1.
  if (k <= (n_te + 1) * b) {
    // Complement of the lower tail, pmf(j-1) = pmf(j) * (j/(n-j+1)) * ((1-b)/b).
    const double log_pmf = std::lgamma(n_te + 1.0) - std::lgamma(static_cast<double>(k)) -
                           std::lgamma(n_te - k + 2.0) + (k - 1) * std::log(b) +
                           (n_te - k + 1) * std::log1p(-b);
    double term = std::exp(log_pmf);
    const double ratio = (1.0 - b) / b;
    double sum = 0.0;
    for (int j = k - 1; j >= 0; --j) {
      sum += term;
      term *= ratio * static_cast<double>(j) / static_cast<double>(n_te - j + 1);
    }
    const double tail = 1.0 - sum;
    return tail > 0.0 ? tail : 0.0;
  }
  // Upper tail directly, pmf(j+1) = pmf(j) * ((n-j)/(j+1)) * (b/(1-b)).
  const double log_pmf_k = std::lgamma(n_te + 1.0) - std::lgamma(k + 1.0) -
                           std::lgamma(n_te - k + 1.0) + k * std::log(b) +
                           (n_te - k) * std::log1p(-b);
  double term = std::exp(log_pmf_k);
  const double ratio = b / (1.0 - b);
  double sum = 0.0;
  for (int j = k; j <= n_te; ++j) {
    sum += term;
    term *= ratio * static_cast<double>(n_te - j) / static_cast<double>(j + 1);
  }
  return sum < 1.0 ? sum : 1.0;
}

std::optional<int> k_alpha(int n_te, double alpha, double b) {
  if (n_te < 1) throw std::invalid_argument("k_alpha: n_te must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("k_alpha: alpha must lie in (0, 1)");
  if (!(b > 0.0 && b <= 0.5)) throw std::invalid_argument("k_alpha: b must lie in (0, 0.5]");

  // S is nonincreasing in k, so scan from above.
  const double target = 1.0 - alpha;
  for (int k = n_te; k >= 1; --k) {
    if (binomial_tail(n_te, k, b) >= target) return k;
  }
  return std::nullopt;
}

std::vector<CoverageCell> coverage_curve(int n_te, const std::vector<int>& k_list,
                                         const std::vector<double>& b_grid) {
  std::vector<CoverageCell> cells;
  cells.reserve(k_list.size() * b_grid.size());
  for (int k : k_list) {
    for (double b : b_grid) {
      if (!(b >= 0.0 && b <= 0.5))
        throw std::invalid_argument("coverage_curve: b values must lie in [0, 0.5]");
      cells.push_back({k, b, binomial_tail(n_te, k, b)});
    }
  }
  return cells;
}

void write_coverage_csv(std::ostream& out, const std::vector<CoverageCell>& cells) {
  out << "k,b,coverage\n";
  for (const auto& c : cells) {
    out << c.k << ',' << std::setprecision(10) << c.b << ',' << c.coverage << '\n';
  }
}

WilsonInterval wilson_interval(long hits, long trials) {
  if (trials <= 0) return {0.0, 1.0};
  const double z = 1.959963984540054;  // 97.5% normal quantile
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {center - half, center + half};
}

}  // namespace rii
