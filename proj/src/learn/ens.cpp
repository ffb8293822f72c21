#include "bugamp/learn/ens.hpp"

#include "bugamp/search/classic.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

namespace bugamp::learn {

namespace {
constexpr std::uint64_t kSampleStream = 0x73616d70ULL;
constexpr std::uint64_t kSmoteStream = 0x736d6f74ULL;
constexpr std::uint64_t kFitStream = 0x666974ULL;
}  // namespace

search::SearchResult ens_search(const ProblemSpec& problem, const search::RunOptions& options,
                                const EnsConfig& config) {
  if (options.budget < config.bootstrap) throw Error("ens_search needs budget >= bootstrap size");
  search::Evaluator eval(problem, options);
  NoiseSource rng(derive_seed({options.seed, kSampleStream}));
  LabeledDataset data;
  data.X.resize(0, static_cast<Eigen::Index>(problem.dim()));
  std::vector<std::uint64_t> seeds;
  std::optional<StackedModel> model;

  auto ranking = [&] {
    std::vector<search::CandidateEvaluation> r(data.size());
    Eigen::VectorXd keys = data.y.cast<double>();
    if (model && data.size() > 0) keys = model->predict_proba(data.X);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      r[i].params = data.X.row(row).transpose();
      r[i].score = data.y[row];
      r[i].rank_key = keys[row];
      r[i].executions_spent = 1;
      r[i].seeds_used = {seeds[i]};
    }
    search::sort_ranking(r);
    return r;
  };
  eval.set_ranker(ranking);

  auto run = [&](const ParamVector& x, const char* tag) {
    seeds.push_back(derive_seed({options.seed, eval.spent()}));
    const bool failed = eval.execute(x, tag);
    data.append(x, failed ? 1 : 0);
  };

  std::uint64_t iteration = 0;
  auto refit = [&] {
    ++iteration;
    if (!data.has_both_classes()) return;
    NoiseSource smote_rng(derive_seed({options.seed, kSmoteStream, iteration}));
    const LabeledDataset train = config.smote ? smote_oversample(data, config.smote_cfg, smote_rng) : data;
    model = StackedModel::fit(train, derive_seed({options.seed, kFitStream, iteration}), config.stacking);
  };

  for (std::uint64_t i = 0; i < config.bootstrap; ++i) run(search::sample_uniform(problem.bounds, rng), "random");
  refit();

  const std::uint64_t batch = config.explore + config.exploit;
  while (eval.remaining() > 0) {
    const std::uint64_t size = std::min(batch, eval.remaining());
    std::uint64_t n_explore = size == batch ? config.explore : size / 2;
    if (!model) n_explore = size;
    const std::uint64_t n_exploit = size - n_explore;
    for (std::uint64_t i = 0; i < n_explore; ++i) run(search::sample_uniform(problem.bounds, rng), "random");
    if (n_exploit > 0) {
      Eigen::MatrixXd pool(static_cast<Eigen::Index>(config.pool), static_cast<Eigen::Index>(problem.dim()));
      for (Eigen::Index i = 0; i < pool.rows(); ++i) pool.row(i) = search::sample_uniform(problem.bounds, rng).transpose();
      const Eigen::VectorXd p = model->predict_proba(pool);
      std::vector<std::size_t> order(config.pool);
      std::iota(order.begin(), order.end(), 0);
      const auto take = static_cast<std::ptrdiff_t>(std::min<std::uint64_t>(n_exploit, config.pool));
      std::partial_sort(order.begin(), order.begin() + take, order.end(), [&](std::size_t a, std::size_t b) {
        const double pa = p[static_cast<Eigen::Index>(a)], pb = p[static_cast<Eigen::Index>(b)];
        return pa > pb || (pa == pb && a < b);
      });
      for (std::ptrdiff_t i = 0; i < take; ++i) run(pool.row(static_cast<Eigen::Index>(order[static_cast<std::size_t>(i)])).transpose(), "ranked");
    }
    refit();
  }
  return eval.finish(ranking());
}

}  // namespace bugamp::learn
