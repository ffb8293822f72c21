#pragma once

#include "bugamp/learn/learners.hpp"

#include <functional>
#include <memory>
#include <vector>

namespace bugamp::learn {

inline const std::vector<LearnerKind> kDefaultBaseKinds = {LearnerKind::LogisticRegression, LearnerKind::DecisionTree,
                                                           LearnerKind::RandomForest, LearnerKind::MLP};

struct StackingConfig {
  std::vector<LearnerKind> kinds = kDefaultBaseKinds;
  std::size_t folds = 5;
  /// Append the raw features to the meta learner's input.
  bool passthrough = true;
  LearnerConfig learners;
};

/// Stratified fold index per row: each class is shuffled and dealt round-robin.
std::vector<std::size_t> stratified_folds(const Eigen::VectorXi& y, std::size_t folds, std::uint64_t seed);

struct OutOfFold {
  Eigen::MatrixXd probs;           // n x kinds
  std::vector<std::size_t> fold;   // fold of each row
};

/// Called once per fold with the rows trained on and the rows predicted.
using FoldObserver = std::function<void(std::size_t fold, const std::vector<std::size_t>& train,
                                        const std::vector<std::size_t>& held_out)>;

/// Base-learner probabilities where each row is predicted by models that
/// never saw it. Throws TooFewRows when |data| < folds.
OutOfFold out_of_fold_probs(const LabeledDataset& data, const StackingConfig& cfg, std::uint64_t seed,
                            const FoldObserver& observer = {});

class StackedModel {
public:
  /// Meta learner fit on out-of-fold probabilities (and raw features when
  /// passthrough is on); the base learners are then refit on all rows.
  static StackedModel fit(const LabeledDataset& data, std::uint64_t seed, const StackingConfig& cfg = {});

  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const;
  double predict_proba(const ParamVector& x) const;

  std::size_t meta_width() const { return base_.size() + (passthrough_ ? dim_ : 0); }
  const std::vector<std::shared_ptr<const BaseLearner>>& base() const { return base_; }
  const LogisticRegression& meta() const { return *meta_; }

private:
  Eigen::MatrixXd meta_features(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& X) const;

  std::vector<std::shared_ptr<const BaseLearner>> base_;
  std::shared_ptr<const LogisticRegression> meta_;
  bool passthrough_ = true;
  std::size_t dim_ = 0;
};

}  // namespace bugamp::learn
