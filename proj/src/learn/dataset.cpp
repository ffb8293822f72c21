#include "bugamp/learn/dataset.hpp"

#include <algorithm>
#include <numeric>

namespace bugamp::learn {

void LabeledDataset::append(const Eigen::VectorXd& x, int label) {
  if (X.rows() == 0 && X.cols() == 0) X.resize(0, x.size());
  if (x.size() != X.cols()) throw Error("row dimension mismatch");
  X.conservativeResize(X.rows() + 1, Eigen::NoChange);
  X.row(X.rows() - 1) = x.transpose();
  y.conservativeResize(y.size() + 1);
  y[y.size() - 1] = label;
}

LabeledDataset LabeledDataset::subset(const std::vector<std::size_t>& rows) const {
  LabeledDataset d;
  d.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  d.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    d.X.row(static_cast<Eigen::Index>(i)) = X.row(static_cast<Eigen::Index>(rows[i]));
    d.y[static_cast<Eigen::Index>(i)] = y[static_cast<Eigen::Index>(rows[i])];
  }
  return d;
}

void LabeledDataset::validate() const {
  if (X.rows() != y.size()) throw Error("feature and label counts differ");
  for (Eigen::Index i = 0; i < y.size(); ++i)
    if (y[i] != 0 && y[i] != 1) throw Error("labels must be 0 or 1");
}

Eigen::VectorXd balanced_weights(const Eigen::VectorXi& y) {
  const double n = static_cast<double>(y.size());
  const double pos = static_cast<double>(y.sum());
  const double neg = n - pos;
  Eigen::VectorXd w(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) w[i] = y[i] ? n / (2.0 * pos) : n / (2.0 * neg);
  return w;
}

LabeledDataset smote_oversample(const LabeledDataset& data, const SmoteConfig& cfg, NoiseSource& rng) {
  if (cfg.neighbors == 0) throw Error("SMOTE needs at least one neighbor");
  if (!data.has_both_classes()) throw SingleClassData();
  const int minority = data.positives() <= data.negatives() ? 1 : 0;
  std::vector<std::size_t> rows;
  for (Eigen::Index i = 0; i < data.y.size(); ++i)
    if (data.y[i] == minority) rows.push_back(static_cast<std::size_t>(i));
  const std::size_t majority_count = data.size() - rows.size();
  const std::size_t missing = majority_count - rows.size();

  LabeledDataset out = data;
  if (missing == 0) return out;
  const auto start = out.X.rows();
  out.X.conservativeResize(start + static_cast<Eigen::Index>(missing), Eigen::NoChange);
  out.y.conservativeResize(start + static_cast<Eigen::Index>(missing));
  out.y.tail(static_cast<Eigen::Index>(missing)).setConstant(minority);

  // Nearest minority neighbors of every minority row, by Euclidean distance
  // with ties to the lower row.
  const std::size_t k = std::min(cfg.neighbors, rows.size() - 1);
  std::vector<std::vector<std::size_t>> nn(rows.size());
  if (k > 0) {
    std::vector<std::pair<double, std::size_t>> dist;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      dist.clear();
      for (std::size_t b = 0; b < rows.size(); ++b)
        if (b != a)
          dist.emplace_back((data.X.row(static_cast<Eigen::Index>(rows[a])) - data.X.row(static_cast<Eigen::Index>(rows[b])))
                                .squaredNorm(),
                            b);
      std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k), dist.end());
      for (std::size_t j = 0; j < k; ++j) nn[a].push_back(dist[j].second);
    }
  }

  for (std::size_t s = 0; s < missing; ++s) {
    const std::size_t a = rows.size() == 1 ? 0 : rng.below(rows.size());
    const auto row = start + static_cast<Eigen::Index>(s);
    const Eigen::RowVectorXd x = data.X.row(static_cast<Eigen::Index>(rows[a]));
    if (k == 0) {
      out.X.row(row) = x;
      continue;
    }
    const std::size_t b = nn[a][rng.below(k)];
    const double lambda = rng.uniform();
    out.X.row(row) = x + lambda * (data.X.row(static_cast<Eigen::Index>(rows[b])) - x);
  }
  return out;
}

}  // namespace bugamp::learn
