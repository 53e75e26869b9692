#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>

namespace rii {

// Regression sample: inputs x (n rows, d columns) and targets y (length n).
// All entries are finite; construction rejects anything else.
struct Dataset {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;

  int n() const { return static_cast<int>(x.rows()); }
  int d() const { return static_cast<int>(x.cols()); }
};

// Validates shape agreement and finiteness.
Dataset make_dataset(Eigen::MatrixXd x, Eigen::VectorXd y);

// Ad hoc predictions for a test split. The split API hands the predictor
// only the training half, which is what keeps y_hat independent of the
// true test targets.
struct PredictionSet {
  Eigen::VectorXd y_hat;
};

struct SplitResult {
  Dataset test;
  Dataset train;
};

// Disjoint uniform-random partition without replacement; deterministic
// given seed. Throws std::invalid_argument when n_te is out of range.
SplitResult split_dataset(const Dataset& data, int n_te, std::uint64_t seed);

// CSV schema: header "x1,...,xd,y", one row per sample.
Dataset read_dataset_csv(std::istream& in);
void write_dataset_csv(std::ostream& out, const Dataset& data);

}  // namespace rii
