#include "bugamp/learn/stacking.hpp"

#include <algorithm>

namespace bugamp::learn {

namespace {
constexpr std::uint64_t kFoldStream = 0x666f6c64ULL;
constexpr std::uint64_t kBaseStream = 0x62617365ULL;
}  // namespace

std::vector<std::size_t> stratified_folds(const Eigen::VectorXi& y, std::size_t folds, std::uint64_t seed) {
  if (folds == 0) throw Error("need at least one fold");
  NoiseSource rng(derive_seed({seed, kFoldStream}));
  std::vector<std::size_t> fold(static_cast<std::size_t>(y.size()));
  std::size_t next = 0;
  for (int label : {0, 1}) {
    std::vector<std::size_t> rows;
    for (Eigen::Index i = 0; i < y.size(); ++i)
      if (y[i] == label) rows.push_back(static_cast<std::size_t>(i));
    std::shuffle(rows.begin(), rows.end(), rng);
    // Continue the deal across classes so fold sizes stay balanced.
    for (auto r : rows) fold[r] = next++ % folds;
  }
  return fold;
}

OutOfFold out_of_fold_probs(const LabeledDataset& data, const StackingConfig& cfg, std::uint64_t seed,
                            const FoldObserver& observer) {
  if (data.size() < cfg.folds) throw TooFewRows("out-of-fold predictions need at least as many rows as folds");
  OutOfFold out;
  out.fold = stratified_folds(data.y, cfg.folds, seed);
  out.probs.resize(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(cfg.kinds.size()));
  for (std::size_t f = 0; f < cfg.folds; ++f) {
    std::vector<std::size_t> train, held;
    for (std::size_t r = 0; r < data.size(); ++r) (out.fold[r] == f ? held : train).push_back(r);
    if (held.empty()) continue;
    if (observer) observer(f, train, held);
    const LabeledDataset tr = data.subset(train);
    const LabeledDataset te = data.subset(held);
    const Eigen::VectorXd w = balanced_weights(tr.y);
    for (std::size_t k = 0; k < cfg.kinds.size(); ++k) {
      const auto model = fit_base(cfg.kinds[k], tr, tr.has_both_classes() ? w : Eigen::VectorXd::Ones(tr.y.size()),
                                  derive_seed({seed, kBaseStream, f, k}), cfg.learners);
      const Eigen::VectorXd p = model->predict_proba(te.X);
      for (std::size_t i = 0; i < held.size(); ++i)
        out.probs(static_cast<Eigen::Index>(held[i]), static_cast<Eigen::Index>(k)) = p[static_cast<Eigen::Index>(i)];
    }
  }
  return out;
}

StackedModel StackedModel::fit(const LabeledDataset& data, std::uint64_t seed, const StackingConfig& cfg) {
  if (!data.has_both_classes()) throw SingleClassData();
  StackedModel m;
  m.passthrough_ = cfg.passthrough;
  m.dim_ = data.dim();
  const OutOfFold oof = out_of_fold_probs(data, cfg, seed);
  const Eigen::VectorXd w = balanced_weights(data.y);
  m.meta_ = LogisticRegression::fit(m.meta_features(oof.probs, data.X), data.y, w, cfg.learners.logistic);
  for (std::size_t k = 0; k < cfg.kinds.size(); ++k)
    m.base_.push_back(fit_base(cfg.kinds[k], data, w, derive_seed({seed, kBaseStream, cfg.folds, k}), cfg.learners));
  return m;
}

Eigen::MatrixXd StackedModel::meta_features(const Eigen::MatrixXd& probs, const Eigen::MatrixXd& X) const {
  if (!passthrough_) return probs;
  Eigen::MatrixXd z(X.rows(), probs.cols() + X.cols());
  z << probs, X;
  return z;
}

Eigen::VectorXd StackedModel::predict_proba(const Eigen::MatrixXd& X) const {
  if (static_cast<std::size_t>(X.cols()) != dim_) throw Error("feature width mismatch");
  Eigen::MatrixXd probs(X.rows(), static_cast<Eigen::Index>(base_.size()));
  for (std::size_t k = 0; k < base_.size(); ++k) probs.col(static_cast<Eigen::Index>(k)) = base_[k]->predict_proba(X);
  return meta_->predict_proba(meta_features(probs, X));
}

double StackedModel::predict_proba(const ParamVector& x) const {
  return predict_proba(Eigen::MatrixXd(x.transpose()))[0];
}

}  // namespace bugamp::learn
