#pragma once

#include "bugamp/learn/dataset.hpp"

#include <memory>
#include <string>
#include <vector>

namespace bugamp::learn {

enum class LearnerKind : std::uint8_t { LogisticRegression, DecisionTree, RandomForest, MLP };

std::string to_string(LearnerKind kind);

/// Binary probabilistic classifier.
class BaseLearner {
public:
  virtual ~BaseLearner() = default;
  virtual LearnerKind kind() const = 0;
  /// Probability of class 1 for each row of X.
  virtual Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const = 0;
  /// True when fitted as a constant prior (single class or identical rows).
  bool is_prior() const { return prior_; }

protected:
  bool prior_ = false;
};

/// Per-column affine map to zero mean and unit deviation; constant columns
/// are only centered.
struct Standardizer {
  Eigen::RowVectorXd mean;
  Eigen::RowVectorXd scale;

  static Standardizer fit(const Eigen::MatrixXd& X);
  Eigen::MatrixXd apply(const Eigen::MatrixXd& X) const;
};

// ------------------------------------------------------------ logistic model

struct LogisticConfig {
  int max_epochs = 1000;
  double l2 = 1e-4;
  double tolerance = 1e-6;
};

class LogisticRegression final : public BaseLearner {
public:
  LearnerKind kind() const override { return LearnerKind::LogisticRegression; }
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override;

  /// Weighted mean negative log-likelihood plus l2/2 * |coef|^2, where
  /// theta = [coef; bias]. Fills `grad` when non-null.
  static double loss(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                     const Eigen::VectorXd& w, double l2, Eigen::VectorXd* grad);

  /// Full-batch gradient descent on standardized features.
  static std::unique_ptr<LogisticRegression> fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                                 const Eigen::VectorXd& w, const LogisticConfig& cfg = {});

  const Eigen::VectorXd& theta() const { return theta_; }

private:
  Standardizer std_;
  Eigen::VectorXd theta_;
};

// ------------------------------------------------------------- trees

struct TreeConfig {
  std::size_t max_features = 0;  // 0 = every feature at every node
  std::size_t max_depth = 0;     // 0 = unlimited
};

struct GiniSplit {
  bool valid = false;
  std::size_t feature = 0;
  double threshold = 0.0;
  /// Weighted mean Gini impurity of the two children.
  double impurity = 0.0;
};

/// Best split of `rows` over `features` by weighted Gini impurity. Thresholds
/// are midpoints between consecutive distinct values; ties keep the earliest
/// feature in `features` and the lowest threshold.
GiniSplit best_gini_split(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, const Eigen::VectorXd& w,
                          const std::vector<std::size_t>& rows, const std::vector<std::size_t>& features);

/// Weighted Gini impurity of a class-weight pair.
inline double gini(double w0, double w1) {
  const double t = w0 + w1;
  return t > 0 ? 1.0 - (w0 * w0 + w1 * w1) / (t * t) : 0.0;
}

class DecisionTree final : public BaseLearner {
public:
  struct Node {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    double p1 = 0.0;  // weighted class-1 fraction
  };

  LearnerKind kind() const override { return LearnerKind::DecisionTree; }
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override;
  double predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const;

  /// Per-feature row orders of X, stably sorted by value.
  using SortedColumns = std::vector<std::vector<int>>;
  static SortedColumns sort_columns(const Eigen::MatrixXd& X);

  /// CART grown until leaves are pure or unsplittable. Rows with zero weight
  /// are ignored. `sorted` may carry sort_columns(X) to skip the sort.
  static std::unique_ptr<DecisionTree> fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                           const Eigen::VectorXd& w, const TreeConfig& cfg, NoiseSource& rng,
                                           const SortedColumns* sorted = nullptr);

  /// Adds this tree's probability for every row of X to `acc`.
  void accumulate(const Eigen::MatrixXd& X, Eigen::VectorXd& acc) const;

  const std::vector<Node>& nodes() const { return nodes_; }

private:
  std::vector<Node> nodes_;
};

struct ForestConfig {
  std::size_t trees = 100;
};

class RandomForest final : public BaseLearner {
public:
  LearnerKind kind() const override { return LearnerKind::RandomForest; }
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override;

  /// Bootstrap trees with sqrt(dim) features per node; tree t draws from
  /// derive_seed({seed, t}).
  static std::unique_ptr<RandomForest> fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                           const Eigen::VectorXd& w, std::uint64_t seed,
                                           const ForestConfig& cfg = {});

  std::size_t tree_count() const { return trees_.size(); }

private:
  std::vector<std::unique_ptr<DecisionTree>> trees_;
};

// -------------------------------------------------------------------- MLP

struct MLPConfig {
  std::vector<int> hidden = {50, 20};
  std::size_t batch = 32;
  int max_epochs = 500;
  double learning_rate = 0.01;
  double momentum = 0.9;
  double l2 = 1e-4;
  double validation_fraction = 0.1;
  int patience = 10;
  double tolerance = 1e-4;
};

/// Rectifier hidden layers and a logistic output.
class MLP final : public BaseLearner {
public:
  LearnerKind kind() const override { return LearnerKind::MLP; }
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override;

  /// Layer sizes from input to output, e.g. {dim, 50, 20, 1}.
  static std::size_t parameter_count(const std::vector<int>& sizes);

  /// Weighted mean cross-entropy plus l2/2 * |weights|^2 for the flattened
  /// parameters `theta` (per layer: weight matrix column-major, then bias).
  static double loss(const Eigen::VectorXd& theta, const std::vector<int>& sizes, const Eigen::MatrixXd& X,
                     const Eigen::VectorXi& y, const Eigen::VectorXd& w, double l2, Eigen::VectorXd* grad);

  /// Mini-batch momentum descent. The rate halves when the training loss
  /// stops improving for two epochs; training stops after `patience` epochs
  /// without validation improvement and keeps the best parameters.
  static std::unique_ptr<MLP> fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, const Eigen::VectorXd& w,
                                  std::uint64_t seed, const MLPConfig& cfg = {});

  int epochs_run() const { return epochs_; }

private:
  static Eigen::VectorXd forward(const Eigen::VectorXd& theta, const std::vector<int>& sizes,
                                 const Eigen::MatrixXd& X);

  Standardizer std_;
  std::vector<int> sizes_;
  Eigen::VectorXd theta_;
  int epochs_ = 0;
};

// ------------------------------------------------------------------ dispatch

struct LearnerConfig {
  LogisticConfig logistic;
  ForestConfig forest;
  MLPConfig mlp;
};

/// Fits one base learner. Single-class data, or identical rows with mixed
/// labels, give a constant model at the weighted class-1 prior.
std::unique_ptr<BaseLearner> fit_base(LearnerKind kind, const LabeledDataset& data, const Eigen::VectorXd& weights,
                                      std::uint64_t seed, const LearnerConfig& cfg = {});

}  // namespace bugamp::learn
