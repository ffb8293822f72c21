#include "bugamp/bench/registry.hpp"

#include "problems.hpp"

#include <functional>
#include <utility>

namespace bugamp::bench {
namespace detail {

ProblemSpec skeleton(std::string name, std::initializer_list<const char*> delay_labels) {
  ProblemSpec p;
  p.name = std::move(name);
  p.param_names.push_back("C");
  for (const char* l : delay_labels) p.param_names.push_back(l);
  p.bounds = Bounds::unit(p.param_names.size());
  return p;
}

ParamVector vec(std::initializer_list<double> values) {
  ParamVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

}  // namespace detail

namespace {

using Factory = ProblemSpec (*)();

const std::vector<std::pair<std::string, Factory>>& factories() {
  static const std::vector<std::pair<std::string, Factory>> table = {
      {"AtomicityBypass", detail::atomicity_bypass},
      {"BrokenBarrier", detail::broken_barrier},
      {"BrokenPeterson", detail::broken_peterson},
      {"DelayedWrite", detail::delayed_write},
      {"FlaggedDeadlock", detail::flagged_deadlock},
      {"IfNotWhile", detail::if_not_while},
      {"LockOrderInversion", detail::lock_order_inversion},
      {"LostSignal", detail::lost_signal},
      {"PartialLock", detail::partial_lock},
      {"PhantomPermit", detail::phantom_permit},
      {"RaceToWait", detail::race_to_wait},
      {"RacyIncrement", detail::racy_increment},
      {"SemaphoreLeak", detail::semaphore_leak},
      {"SharedCounter", detail::shared_counter},
      {"SharedFlag", detail::shared_flag},
      {"SignalThenWait", detail::signal_then_wait},
      {"SleepingGuard", detail::sleeping_guard},
  };
  return table;
}

std::vector<double> to_list(const ParamVector& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

const std::vector<std::string>& list_problems() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, _] : factories()) out.push_back(name);
    return out;
  }();
  return names;
}

ProblemSpec build_problem(std::string_view name) {
  for (const auto& [n, make] : factories())
    if (n == name) return make();
  throw UnknownProblem(name);
}

TaxonomyTag classify(std::string_view name) { return build_problem(name).taxonomy; }

nlohmann::json manifest(const ProblemSpec& problem) {
  nlohmann::json effects = nlohmann::json::array();
  for (Effect e : problem.taxonomy.effects) effects.push_back(to_string(e));
  nlohmann::json bounds = nlohmann::json::array();
  for (std::size_t i = 0; i < problem.dim(); ++i)
    bounds.push_back({problem.bounds.lo[static_cast<Eigen::Index>(i)], problem.bounds.hi[static_cast<Eigen::Index>(i)]});
  return {
      {"name", problem.name},
      {"dim", problem.dim()},
      {"bounds", bounds},
      {"param_names", problem.param_names},
      {"threads", problem.threads.size()},
      {"effect", effects},
      {"root_cause", to_string(problem.taxonomy.root_cause)},
      {"noise_scale", problem.noise_scale},
      {"bug_witness", to_list(problem.bug_witness)},
      {"pass_witness", to_list(problem.pass_witness)},
      {"insight", problem.insight},
  };
}

}  // namespace bugamp::bench
