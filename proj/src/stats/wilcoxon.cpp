#include "bugamp/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace bugamp::stats {

SignedRanks signed_ranks(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("paired samples differ in length");
  std::vector<double> d;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i] - y[i] != 0.0) d.push_back(x[i] - y[i]);
  std::vector<std::size_t> order(d.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return std::abs(d[a]) < std::abs(d[b]); });

  SignedRanks r;
  r.ranks.resize(d.size());
  r.positive.resize(d.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && std::abs(d[order[j + 1]]) == std::abs(d[order[i]])) ++j;
    const double avg = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t k = i; k <= j; ++k) r.ranks[order[k]] = avg;
    i = j + 1;
  }
  for (std::size_t i = 0; i < d.size(); ++i) {
    r.positive[i] = d[i] > 0;
    if (r.positive[i]) r.w_plus += r.ranks[i];
  }
  return r;
}

double wilcoxon_exact(const SignedRanks& r) {
  // Average ranks are multiples of 1/2, so doubled ranks are integers.
  std::vector<long> doubled;
  long total = 0;
  for (double v : r.ranks) {
    doubled.push_back(std::lround(2.0 * v));
    total += doubled.back();
  }
  std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
  ways[0] = 1.0;
  long reach = 0;
  for (long v : doubled) {
    for (long s = reach; s >= 0; --s) ways[static_cast<std::size_t>(s + v)] += ways[static_cast<std::size_t>(s)];
    reach += v;
  }
  const long threshold = std::lround(2.0 * r.w_plus);
  double hits = 0.0;
  for (long s = threshold; s <= total; ++s) hits += ways[static_cast<std::size_t>(s)];
  return hits / std::ldexp(1.0, static_cast<int>(r.n()));
}

double wilcoxon_normal(const SignedRanks& r) {
  const double n = static_cast<double>(r.n());
  const double mean = n * (n + 1) / 4.0;
  double var = n * (n + 1) * (2 * n + 1) / 24.0;
  std::vector<double> sorted = r.ranks;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    var -= (t * t * t - t) / 48.0;
    i = j;
  }
  if (var <= 0) return r.w_plus >= mean ? 1.0 : 0.0;
  const double z = (r.w_plus - mean - 0.5) / std::sqrt(var);
  return 0.5 * std::erfc(z / std::sqrt(2.0));
}

double wilcoxon_one_sided(const std::vector<double>& x, const std::vector<double>& y) {
  const SignedRanks r = signed_ranks(x, y);
  if (r.n() < kMinPairs)
    throw TooFewPairs("signed-rank test needs at least 5 nonzero differences, got " + std::to_string(r.n()));
  return r.n() <= kExactLimit ? wilcoxon_exact(r) : wilcoxon_normal(r);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Green: return "Green";
    case Verdict::Gray: return "Gray";
    case Verdict::Red: return "Red";
  }
  return "?";
}

Verdict verdict(double p) {
  if (p <= 0.05) return Verdict::Green;
  if (p >= 0.95) return Verdict::Red;
  return Verdict::Gray;
}

Aggregate aggregate(std::vector<double> values) {
  values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return std::isnan(v); }), values.end());
  std::sort(values.begin(), values.end());
  Aggregate a;
  a.n = values.size();
  if (a.n == 0) {
    a.mean = a.ci_lo = a.ci_hi = protocol::kAbsent;
    a.degenerate = true;
    return a;
  }
  const double n = static_cast<double>(a.n);
  a.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (a.n == 1) {
    a.degenerate = true;
  } else {
    double ss = 0.0;
    for (double v : values) ss += (v - a.mean) * (v - a.mean);
    a.sd = std::sqrt(ss / (n - 1));
  }
  const double half = 1.96 * a.sd / std::sqrt(n);
  a.ci_lo = a.mean - half;
  a.ci_hi = a.mean + half;
  return a;
}

}  // namespace bugamp::stats
