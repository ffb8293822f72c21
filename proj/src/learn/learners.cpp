#include "bugamp/learn/learners.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bugamp::learn {

std::string to_string(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::LogisticRegression: return "LogisticRegression";
    case LearnerKind::DecisionTree: return "DecisionTree";
    case LearnerKind::RandomForest: return "RandomForest";
    case LearnerKind::MLP: return "MLP";
  }
  return "?";
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

/// log(1 + exp(z)) without overflow.
double softplus(double z) { return z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

/// Constant model used for degenerate training sets.
class PriorModel final : public BaseLearner {
public:
  PriorModel(LearnerKind kind, double p) : kind_(kind), p_(p) { prior_ = true; }
  LearnerKind kind() const override { return kind_; }
  Eigen::VectorXd predict_proba(const Eigen::MatrixXd& X) const override {
    return Eigen::VectorXd::Constant(X.rows(), p_);
  }

private:
  LearnerKind kind_;
  double p_;
};

}  // namespace

// ------------------------------------------------------------- standardizer

Standardizer Standardizer::fit(const Eigen::MatrixXd& X) {
  Standardizer s;
  const double n = static_cast<double>(std::max<Eigen::Index>(X.rows(), 1));
  s.mean = X.colwise().sum() / n;
  s.scale = ((X.rowwise() - s.mean).array().square().colwise().sum() / n).sqrt();
  for (Eigen::Index j = 0; j < s.scale.size(); ++j)
    if (!(s.scale[j] > 1e-12)) s.scale[j] = 1.0;
  return s;
}

Eigen::MatrixXd Standardizer::apply(const Eigen::MatrixXd& X) const {
  return (X.rowwise() - mean).array().rowwise() / scale.array();
}

// ---------------------------------------------------------------- logistic

double LogisticRegression::loss(const Eigen::VectorXd& theta, const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                const Eigen::VectorXd& w, double l2, Eigen::VectorXd* grad) {
  const Eigen::Index d = X.cols();
  const auto coef = theta.head(d);
  const double bias = theta[d];
  const Eigen::VectorXd z = (X * coef).array() + bias;
  const double wsum = w.sum();
  double l = 0.0;
  Eigen::VectorXd r(z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    l += w[i] * (softplus(z[i]) - y[i] * z[i]);
    r[i] = w[i] * (sigmoid(z[i]) - y[i]) / wsum;
  }
  l = l / wsum + 0.5 * l2 * coef.squaredNorm();
  if (grad) {
    grad->resize(d + 1);
    grad->head(d) = X.transpose() * r + l2 * coef;
    (*grad)[d] = r.sum();
  }
  return l;
}

std::unique_ptr<LogisticRegression> LogisticRegression::fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                                            const Eigen::VectorXd& w, const LogisticConfig& cfg) {
  auto model = std::make_unique<LogisticRegression>();
  model->std_ = Standardizer::fit(X);
  const Eigen::MatrixXd Z = model->std_.apply(X);
  const Eigen::Index d = Z.cols();

  // Step size 1/L from a power-iteration estimate of the Hessian bound.
  Eigen::MatrixXd Zb(Z.rows(), d + 1);
  Zb << Z, Eigen::VectorXd::Ones(Z.rows());
  const Eigen::MatrixXd H = Zb.transpose() * (w.asDiagonal() * Zb) / w.sum();
  Eigen::VectorXd v = Eigen::VectorXd::Ones(d + 1);
  double lambda = 1.0;
  for (int it = 0; it < 50; ++it) {
    Eigen::VectorXd hv = H * v;
    lambda = hv.norm();
    if (lambda <= 0) break;
    v = hv / lambda;
  }
  const double step = 1.0 / (0.25 * std::max(lambda, 1e-12) * 1.05 + cfg.l2);

  // Nesterov-accelerated descent.
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(d + 1), prev = theta, g;
  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    const double mom = static_cast<double>(epoch) / (epoch + 3.0);
    const Eigen::VectorXd look = theta + mom * (theta - prev);
    loss(look, Z, y, w, cfg.l2, &g);
    prev = theta;
    theta = look - step * g;
    if (g.norm() < cfg.tolerance) break;
  }
  model->theta_ = theta;
  return model;
}

Eigen::VectorXd LogisticRegression::predict_proba(const Eigen::MatrixXd& X) const {
  const Eigen::Index d = theta_.size() - 1;
  const Eigen::VectorXd z = (std_.apply(X) * theta_.head(d)).array() + theta_[d];
  return z.unaryExpr([](double v) { return sigmoid(v); });
}

// ------------------------------------------------------------------- trees

namespace {

struct ScanBest {
  GiniSplit split;
  double proxy = -1.0;  // sum over children of (w0^2 + w1^2) / w
};

/// Scans rows already sorted by feature f.
void scan_sorted(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, const Eigen::VectorXd& w, const int* idx,
                 std::size_t n, std::size_t f, double t0, double t1, ScanBest& best) {
  double l0 = 0, l1 = 0;
  const auto fj = static_cast<Eigen::Index>(f);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const int r = idx[i];
    (y[r] ? l1 : l0) += w[r];
    const double a = X(r, fj), b = X(idx[i + 1], fj);
    if (!(a < b)) continue;
    const double r0 = t0 - l0, r1 = t1 - l1;
    const double wl = l0 + l1, wr = r0 + r1;
    if (wl <= 0 || wr <= 0) continue;
    const double proxy = (l0 * l0 + l1 * l1) / wl + (r0 * r0 + r1 * r1) / wr;
    if (proxy > best.proxy) {
      double mid = a + (b - a) / 2.0;
      if (mid >= b) mid = a;
      best.proxy = proxy;
      best.split.valid = true;
      best.split.feature = f;
      best.split.threshold = mid;
      best.split.impurity = 1.0 - proxy / (t0 + t1);
    }
  }
}

}  // namespace

GiniSplit best_gini_split(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, const Eigen::VectorXd& w,
                          const std::vector<std::size_t>& rows, const std::vector<std::size_t>& features) {
  double t0 = 0, t1 = 0;
  for (auto r : rows) (y[static_cast<Eigen::Index>(r)] ? t1 : t0) += w[static_cast<Eigen::Index>(r)];
  ScanBest best;
  std::vector<int> idx(rows.begin(), rows.end());
  for (auto f : features) {
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
      return X(a, static_cast<Eigen::Index>(f)) < X(b, static_cast<Eigen::Index>(f));
    });
    scan_sorted(X, y, w, idx.data(), idx.size(), f, t0, t1, best);
  }
  return best.split;
}

namespace {

/// CART builder over per-feature presorted row orders. Each node owns the
/// same range [lo, hi) in every order array.
class TreeBuilder {
public:
  TreeBuilder(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, const Eigen::VectorXd& w, const TreeConfig& cfg,
              NoiseSource& rng, std::vector<DecisionTree::Node>& nodes)
      : X_(X), y_(y), w_(w), cfg_(cfg), rng_(rng), nodes_(nodes), dim_(static_cast<std::size_t>(X.cols())) {}

  void build(const DecisionTree::SortedColumns* sorted) {
    std::vector<int> active;
    for (Eigen::Index i = 0; i < X_.rows(); ++i)
      if (w_[i] > 0) active.push_back(static_cast<int>(i));
    if (sorted) {
      // Filtering a stable full sort keeps the order a sort of `active` gives.
      order_.assign(dim_, {});
      for (std::size_t f = 0; f < dim_; ++f) {
        order_[f].reserve(active.size());
        for (int r : (*sorted)[f])
          if (w_[r] > 0) order_[f].push_back(r);
      }
    } else {
      order_.assign(dim_, active);
      for (std::size_t f = 0; f < dim_; ++f) {
        const auto fj = static_cast<Eigen::Index>(f);
        std::stable_sort(order_[f].begin(), order_[f].end(), [&](int a, int b) { return X_(a, fj) < X_(b, fj); });
      }
    }
    goes_left_.assign(static_cast<std::size_t>(X_.rows()), 0);
    buffer_.resize(active.size());
    features_.resize(dim_);

    struct Task {
      int node;
      std::size_t lo, hi, depth;
    };
    nodes_.clear();
    nodes_.emplace_back();
    std::vector<Task> stack{{0, 0, active.size(), 0}};
    while (!stack.empty()) {
      const Task t = stack.back();
      stack.pop_back();
      double t0 = 0, t1 = 0;
      for (std::size_t i = t.lo; i < t.hi; ++i) (y_[order_[0][i]] ? t1 : t0) += w_[order_[0][i]];
      nodes_[static_cast<std::size_t>(t.node)].p1 = (t0 + t1) > 0 ? t1 / (t0 + t1) : 0.0;
      if (t0 <= 0 || t1 <= 0 || t.hi - t.lo < 2) continue;
      if (cfg_.max_depth && t.depth >= cfg_.max_depth) continue;

      const GiniSplit split = choose(t.lo, t.hi, t0, t1);
      if (!split.valid) continue;
      const std::size_t mid = partition(t.lo, t.hi, split);
      const int left = static_cast<int>(nodes_.size());
      nodes_.emplace_back();
      nodes_.emplace_back();
      auto& n = nodes_[static_cast<std::size_t>(t.node)];
      n.feature = static_cast<int>(split.feature);
      n.threshold = split.threshold;
      n.left = left;
      n.right = left + 1;
      stack.push_back({left + 1, mid, t.hi, t.depth + 1});
      stack.push_back({left, t.lo, mid, t.depth + 1});
    }
  }

private:
  bool constant(std::size_t f, std::size_t lo, std::size_t hi) const {
    const auto fj = static_cast<Eigen::Index>(f);
    return !(X_(order_[f][lo], fj) < X_(order_[f][hi - 1], fj));
  }

  GiniSplit choose(std::size_t lo, std::size_t hi, double t0, double t1) {
    ScanBest best;
    const std::size_t want = cfg_.max_features && cfg_.max_features < dim_ ? cfg_.max_features : dim_;
    std::iota(features_.begin(), features_.end(), 0);
    std::size_t usable = 0;
    for (std::size_t i = 0; i < dim_ && usable < want; ++i) {
      if (want < dim_) std::swap(features_[i], features_[i + rng_.below(dim_ - i)]);
      const std::size_t f = features_[i];
      if (constant(f, lo, hi)) continue;
      ++usable;
      scan_sorted(X_, y_, w_, order_[f].data() + lo, hi - lo, f, t0, t1, best);
    }
    return best.split;
  }

  std::size_t partition(std::size_t lo, std::size_t hi, const GiniSplit& s) {
    const auto fj = static_cast<Eigen::Index>(s.feature);
    std::size_t nl = 0;
    for (std::size_t i = lo; i < hi; ++i) {
      const int r = order_[0][i];
      goes_left_[static_cast<std::size_t>(r)] = X_(r, fj) <= s.threshold;
      nl += goes_left_[static_cast<std::size_t>(r)];
    }
    for (std::size_t f = 0; f < dim_; ++f) {
      auto& ord = order_[f];
      std::size_t a = lo, b = 0;
      for (std::size_t i = lo; i < hi; ++i) {
        const int r = ord[i];
        if (goes_left_[static_cast<std::size_t>(r)])
          ord[a++] = r;
        else
          buffer_[b++] = r;
      }
      std::copy(buffer_.begin(), buffer_.begin() + static_cast<std::ptrdiff_t>(b), ord.begin() + static_cast<std::ptrdiff_t>(a));
    }
    return lo + nl;
  }

  const Eigen::MatrixXd& X_;
  const Eigen::VectorXi& y_;
  const Eigen::VectorXd& w_;
  TreeConfig cfg_;
  NoiseSource& rng_;
  std::vector<DecisionTree::Node>& nodes_;
  std::size_t dim_;
  std::vector<std::vector<int>> order_;
  std::vector<char> goes_left_;
  std::vector<int> buffer_;
  std::vector<std::size_t> features_;
};

}  // namespace

DecisionTree::SortedColumns DecisionTree::sort_columns(const Eigen::MatrixXd& X) {
  SortedColumns out(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index f = 0; f < X.cols(); ++f) {
    auto& ord = out[static_cast<std::size_t>(f)];
    ord.resize(static_cast<std::size_t>(X.rows()));
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) { return X(a, f) < X(b, f); });
  }
  return out;
}

std::unique_ptr<DecisionTree> DecisionTree::fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                                const Eigen::VectorXd& w, const TreeConfig& cfg, NoiseSource& rng,
                                                const SortedColumns* sorted) {
  auto tree = std::make_unique<DecisionTree>();
  TreeBuilder(X, y, w, cfg, rng, tree->nodes_).build(sorted);
  return tree;
}

void DecisionTree::accumulate(const Eigen::MatrixXd& X, Eigen::VectorXd& acc) const {
  const Node* nodes = nodes_.data();
  for (Eigen::Index r = 0; r < X.rows(); ++r) {
    const Node* n = nodes;
    while (n->feature >= 0) n = nodes + (X(r, n->feature) <= n->threshold ? n->left : n->right);
    acc[r] += n->p1;
  }
}

double DecisionTree::predict_row(const Eigen::Ref<const Eigen::RowVectorXd>& x) const {
  std::size_t i = 0;
  while (nodes_[i].feature >= 0)
    i = static_cast<std::size_t>(x[nodes_[i].feature] <= nodes_[i].threshold ? nodes_[i].left : nodes_[i].right);
  return nodes_[i].p1;
}

Eigen::VectorXd DecisionTree::predict_proba(const Eigen::MatrixXd& X) const {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(X.rows());
  accumulate(X, p);
  return p;
}

std::unique_ptr<RandomForest> RandomForest::fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y,
                                                const Eigen::VectorXd& w, std::uint64_t seed,
                                                const ForestConfig& cfg) {
  auto forest = std::make_unique<RandomForest>();
  const auto n = static_cast<std::uint64_t>(X.rows());
  TreeConfig tc;
  tc.max_features = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(static_cast<double>(X.cols()))));
  Eigen::VectorXd bw(X.rows());
  const auto sorted = DecisionTree::sort_columns(X);
  for (std::size_t t = 0; t < cfg.trees; ++t) {
    NoiseSource rng(derive_seed({seed, t}));
    bw.setZero();
    for (std::uint64_t i = 0; i < n; ++i) bw[static_cast<Eigen::Index>(rng.below(n))] += 1.0;
    bw.array() *= w.array();
    forest->trees_.push_back(DecisionTree::fit(X, y, bw, tc, rng, &sorted));
  }
  return forest;
}

Eigen::VectorXd RandomForest::predict_proba(const Eigen::MatrixXd& X) const {
  // Tree-major keeps one tree's nodes in cache; each row still sums in tree order.
  Eigen::VectorXd p = Eigen::VectorXd::Zero(X.rows());
  for (const auto& t : trees_) t->accumulate(X, p);
  return p / static_cast<double>(trees_.size());
}

// --------------------------------------------------------------------- MLP

std::size_t MLP::parameter_count(const std::vector<int>& sizes) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l)
    n += static_cast<std::size_t>(sizes[l] * sizes[l + 1] + sizes[l + 1]);
  return n;
}

namespace {

using ConstMap = Eigen::Map<const Eigen::MatrixXd>;

/// Buffers reused across mini-batches. pre[l] holds layer l's
/// pre-activation; act[l] the rectified output fed to layer l + 1.
struct MlpWorkspace {
  std::vector<Eigen::MatrixXd> pre, act;
  Eigen::MatrixXd dz, da;
};

void mlp_forward(const Eigen::VectorXd& theta, const std::vector<int>& sizes, const Eigen::MatrixXd& X,
                 MlpWorkspace& ws) {
  const std::size_t layers = sizes.size() - 1;
  ws.pre.resize(layers);
  ws.act.resize(layers);
  const Eigen::MatrixXd* in = &X;
  std::size_t off = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    ConstMap W(theta.data() + off, sizes[l], sizes[l + 1]);
    off += static_cast<std::size_t>(sizes[l] * sizes[l + 1]);
    Eigen::Map<const Eigen::RowVectorXd> b(theta.data() + off, sizes[l + 1]);
    off += static_cast<std::size_t>(sizes[l + 1]);
    ws.pre[l].noalias() = *in * W;
    ws.pre[l].rowwise() += b;
    if (l + 1 < layers) {
      ws.act[l] = ws.pre[l].cwiseMax(0.0);
      in = &ws.act[l];
    }
  }
}

double mlp_loss(const Eigen::VectorXd& theta, const std::vector<int>& sizes, const Eigen::MatrixXd& X,
                const Eigen::VectorXi& y, const Eigen::VectorXd& w, double l2, Eigen::VectorXd* grad,
                MlpWorkspace& ws) {
  mlp_forward(theta, sizes, X, ws);
  const Eigen::MatrixXd& z = ws.pre.back();
  const double wsum = w.sum();
  double l = 0.0;
  ws.dz.resize(z.rows(), 1);
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    l += w[i] * (softplus(z(i, 0)) - y[i] * z(i, 0));
    ws.dz(i, 0) = w[i] * (sigmoid(z(i, 0)) - y[i]) / wsum;
  }
  l /= wsum;
  const std::size_t layers = sizes.size() - 1;
  std::size_t off = 0;
  std::vector<std::size_t> offsets(layers);
  for (std::size_t layer = 0; layer < layers; ++layer) {
    offsets[layer] = off;
    ConstMap W(theta.data() + off, sizes[layer], sizes[layer + 1]);
    l += 0.5 * l2 * W.squaredNorm();
    off += static_cast<std::size_t>(sizes[layer] * sizes[layer + 1] + sizes[layer + 1]);
  }
  if (!grad) return l;

  grad->resize(theta.size());
  for (std::size_t layer = layers; layer-- > 0;) {
    const std::size_t o = offsets[layer];
    const Eigen::Index in = sizes[layer], out = sizes[layer + 1];
    ConstMap W(theta.data() + o, in, out);
    Eigen::Map<Eigen::MatrixXd> gW(grad->data() + o, in, out);
    Eigen::Map<Eigen::RowVectorXd> gb(grad->data() + o + static_cast<std::size_t>(in * out), out);
    const Eigen::MatrixXd& a = layer == 0 ? X : ws.act[layer - 1];
    gW = a.transpose() * ws.dz + l2 * W;
    gb = ws.dz.colwise().sum();
    if (layer > 0) {
      ws.da.noalias() = ws.dz * W.transpose();
      ws.dz = (ws.pre[layer - 1].array() > 0.0).select(ws.da, 0.0);
    }
  }
  return l;
}

}  // namespace

double MLP::loss(const Eigen::VectorXd& theta, const std::vector<int>& sizes, const Eigen::MatrixXd& X,
                 const Eigen::VectorXi& y, const Eigen::VectorXd& w, double l2, Eigen::VectorXd* grad) {
  if (theta.size() != static_cast<Eigen::Index>(parameter_count(sizes))) throw Error("MLP parameter size mismatch");
  MlpWorkspace ws;
  return mlp_loss(theta, sizes, X, y, w, l2, grad, ws);
}

Eigen::VectorXd MLP::forward(const Eigen::VectorXd& theta, const std::vector<int>& sizes, const Eigen::MatrixXd& X) {
  MlpWorkspace ws;
  mlp_forward(theta, sizes, X, ws);
  return ws.pre.back().col(0).unaryExpr([](double v) { return sigmoid(v); });
}

Eigen::VectorXd MLP::predict_proba(const Eigen::MatrixXd& X) const { return forward(theta_, sizes_, std_.apply(X)); }

std::unique_ptr<MLP> MLP::fit(const Eigen::MatrixXd& X, const Eigen::VectorXi& y, const Eigen::VectorXd& w,
                              std::uint64_t seed, const MLPConfig& cfg) {
  auto model = std::make_unique<MLP>();
  NoiseSource rng(seed);
  model->std_ = Standardizer::fit(X);
  const Eigen::MatrixXd Z = model->std_.apply(X);
  model->sizes_.push_back(static_cast<int>(X.cols()));
  for (int h : cfg.hidden) model->sizes_.push_back(h);
  model->sizes_.push_back(1);
  const auto& sizes = model->sizes_;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(parameter_count(sizes)));
  std::size_t off = 0;
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const double bound = std::sqrt(6.0 / (sizes[l] + sizes[l + 1]));
    for (int i = 0; i < sizes[l] * sizes[l + 1]; ++i) theta[static_cast<Eigen::Index>(off++)] = rng.uniform(-bound, bound);
    off += static_cast<std::size_t>(sizes[l + 1]);
  }

  std::vector<std::size_t> idx(static_cast<std::size_t>(Z.rows()));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  std::size_t n_val = static_cast<std::size_t>(cfg.validation_fraction * static_cast<double>(idx.size()));
  if (n_val == 0 || n_val >= idx.size()) n_val = 0;
  const std::vector<std::size_t> val(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<std::size_t> train(idx.begin() + static_cast<std::ptrdiff_t>(n_val), idx.end());

  auto gather = [&](const std::vector<std::size_t>& rows, std::size_t lo, std::size_t hi, Eigen::MatrixXd& bx,
                    Eigen::VectorXi& by, Eigen::VectorXd& bw) {
    const auto n = static_cast<Eigen::Index>(hi - lo);
    bx.resize(n, Z.cols());
    by.resize(n);
    bw.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto r = static_cast<Eigen::Index>(rows[lo + static_cast<std::size_t>(i)]);
      bx.row(i) = Z.row(r);
      by[i] = y[r];
      bw[i] = w[r];
    }
  };
  Eigen::MatrixXd vx;
  Eigen::VectorXi vy;
  Eigen::VectorXd vw;
  if (n_val) gather(val, 0, val.size(), vx, vy, vw);

  Eigen::VectorXd velocity = Eigen::VectorXd::Zero(theta.size()), g, best_theta = theta;
  double lr = cfg.learning_rate;
  double best_score = std::numeric_limits<double>::infinity();
  double best_train = std::numeric_limits<double>::infinity();
  int stale = 0, train_stale = 0;
  Eigen::MatrixXd bx;
  Eigen::VectorXi by;
  Eigen::VectorXd bw;
  MlpWorkspace ws;
  int epoch = 0;
  while (epoch < cfg.max_epochs) {
    ++epoch;
    std::shuffle(train.begin(), train.end(), rng);
    double train_loss = 0.0;
    for (std::size_t lo = 0; lo < train.size(); lo += cfg.batch) {
      const std::size_t hi = std::min(train.size(), lo + cfg.batch);
      gather(train, lo, hi, bx, by, bw);
      if (bw.sum() <= 0) continue;
      train_loss += mlp_loss(theta, sizes, bx, by, bw, cfg.l2, &g, ws) * static_cast<double>(hi - lo);
      velocity = cfg.momentum * velocity - lr * g;
      theta += velocity;
    }
    train_loss /= static_cast<double>(train.size());
    if (train_loss > best_train - cfg.tolerance) {
      if (++train_stale >= 2) {
        lr /= 2.0;
        train_stale = 0;
      }
    } else {
      train_stale = 0;
    }
    best_train = std::min(best_train, train_loss);

    const double score = n_val ? mlp_loss(theta, sizes, vx, vy, vw, cfg.l2, nullptr, ws) : train_loss;
    if (score < best_score - cfg.tolerance) {
      best_score = score;
      best_theta = theta;
      stale = 0;
    } else if (++stale >= cfg.patience) {
      break;
    }
  }
  model->theta_ = best_theta;
  model->epochs_ = epoch;
  return model;
}

// ---------------------------------------------------------------- dispatch

std::unique_ptr<BaseLearner> fit_base(LearnerKind kind, const LabeledDataset& data, const Eigen::VectorXd& weights,
                                      std::uint64_t seed, const LearnerConfig& cfg) {
  data.validate();
  if (data.size() == 0) throw Error("cannot fit on an empty dataset");
  const double wsum = weights.sum();
  double p = 0;
  for (Eigen::Index i = 0; i < data.y.size(); ++i) p += data.y[i] * weights[i];
  p = wsum > 0 ? p / wsum : 0.0;
  bool identical = true;
  for (Eigen::Index i = 1; i < data.X.rows() && identical; ++i) identical = data.X.row(i) == data.X.row(0);
  if (!data.has_both_classes() || identical) return std::make_unique<PriorModel>(kind, p);

  switch (kind) {
    case LearnerKind::LogisticRegression: return LogisticRegression::fit(data.X, data.y, weights, cfg.logistic);
    case LearnerKind::DecisionTree: {
      NoiseSource rng(seed);
      return DecisionTree::fit(data.X, data.y, weights, {}, rng);
    }
    case LearnerKind::RandomForest: return RandomForest::fit(data.X, data.y, weights, seed, cfg.forest);
    case LearnerKind::MLP: return MLP::fit(data.X, data.y, weights, seed, cfg.mlp);
  }
  throw Error("unknown learner kind");
}

}  // namespace bugamp::learn
