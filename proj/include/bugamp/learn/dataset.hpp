#pragma once

#include "bugamp/sim/noise.hpp"
#include "bugamp/sim/types.hpp"

#include <Eigen/Dense>

#include <vector>

namespace bugamp::learn {

class SingleClassData : public Error {
public:
  SingleClassData() : Error("dataset holds a single class") {}
};

class TooFewRows : public Error {
public:
  using Error::Error;
};

/// Rows of features with 0/1 labels.
struct LabeledDataset {
  Eigen::MatrixXd X;  // n x dim
  Eigen::VectorXi y;  // n, values 0 or 1

  std::size_t size() const { return static_cast<std::size_t>(X.rows()); }
  std::size_t dim() const { return static_cast<std::size_t>(X.cols()); }
  std::size_t positives() const { return static_cast<std::size_t>(y.sum()); }
  std::size_t negatives() const { return size() - positives(); }
  bool has_both_classes() const { return positives() > 0 && negatives() > 0; }

  void append(const Eigen::VectorXd& x, int label);
  LabeledDataset subset(const std::vector<std::size_t>& rows) const;
  void validate() const;
};

/// Balanced class weights: n / (2 * n_class) for each row's class.
Eigen::VectorXd balanced_weights(const Eigen::VectorXi& y);

struct SmoteConfig {
  std::size_t neighbors = 5;
};

/// Adds synthetic minority rows x + lambda * (x_nn - x) until the classes are
/// equal in size. A lone minority row is duplicated instead.
LabeledDataset smote_oversample(const LabeledDataset& data, const SmoteConfig& cfg, NoiseSource& rng);

}  // namespace bugamp::learn
