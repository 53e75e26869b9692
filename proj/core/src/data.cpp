#include "rii/data.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "rii/rng.hpp"

namespace rii {

Dataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y) {
  if (x.rows() != y.size())
    throw std::invalid_argument("Dataset: row count of x must equal length of y");
  if (!x.allFinite() || !y.allFinite())
    throw std::invalid_argument("Dataset: all entries must be finite");
  return Dataset{std::move(x), std::move(y)};
}

SplitResult split_dataset(const Dataset& data, int n_te, std::uint64_t seed) {
  const int n = data.n();
  if (n_te < 1 || n_te > n)
    throw std::invalid_argument("split_dataset: n_te must lie in [1, n]");

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto rng = make_rng(seed, /*stream=*/0x53504c49u);  // "SPLI" tag
  std::shuffle(idx.begin(), idx.end(), rng);

  const int d = data.d();
  Dataset test{Eigen::MatrixXd(n_te, d), Eigen::VectorXd(n_te)};
  Dataset train{Eigen::MatrixXd(n - n_te, d), Eigen::VectorXd(n - n_te)};
  for (int i = 0; i < n_te; ++i) {
    test.x.row(i) = data.x.row(idx[i]);
    test.y(i) = data.y(idx[i]);
  }
  for (int i = n_te; i < n; ++i) {
    train.x.row(i - n_te) = data.x.row(idx[i]);
    train.y(i - n_te) = data.y(idx[i]);
  }
  return {std::move(test), std::move(train)};
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(tok);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_line(line);
  if (header.size() < 2 || header.back() != "y")
    throw std::invalid_argument("csv: expected header x1,...,xd,y");
  const int d = static_cast<int>(header.size()) - 1;

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto toks = split_line(line);
    if (static_cast<int>(toks.size()) != d + 1)
      throw std::invalid_argument("csv: row with wrong column count");
    std::vector<double> vals(d + 1);
    for (int j = 0; j <= d; ++j) {
      try {
        std::size_t pos = 0;
        vals[j] = std::stod(toks[j], &pos);
        if (pos != toks[j].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw std::invalid_argument("csv: non-numeric cell '" + toks[j] + "'");
      }
    }
    rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw std::invalid_argument("csv: no data rows");

  Eigen::MatrixXd x(rows.size(), d);
  Eigen::VectorXd y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < d; ++j) x(static_cast<int>(i), j) = rows[i][j];
    y(static_cast<int>(i)) = rows[i][d];
  }
  return make_dataset(std::move(x), std::move(y));
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
  const int d = data.d();
  for (int j = 0; j < d; ++j) out << 'x' << (j + 1) << ',';
  out << "y\n";
  out << std::setprecision(10);
  for (int i = 0; i < data.n(); ++i) {
    for (int j = 0; j < d; ++j) out << data.x(i, j) << ',';
    out << data.y(i) << '\n';
  }
}

}  // namespace rii
