#pragma once

#include "bugamp/protocol/experiment.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace bugamp::stats {

class TooFewPairs : public Error {
public:
  using Error::Error;
};

inline constexpr std::size_t kMinPairs = 5;
inline constexpr std::size_t kExactLimit = 12;

/// Nonzero differences x - y with average ranks of |d|.
struct SignedRanks {
  std::vector<double> ranks;
  std::vector<bool> positive;
  double w_plus = 0.0;
  std::size_t n() const { return ranks.size(); }
};

SignedRanks signed_ranks(const std::vector<double>& x, const std::vector<double>& y);

/// P(W >= w_plus) by counting sign assignments of the given ranks.
double wilcoxon_exact(const SignedRanks& r);

/// Normal approximation with tie and continuity corrections.
double wilcoxon_normal(const SignedRanks& r);

/// One-sided test of "x tends to exceed y". Zero differences are dropped;
/// exact for n <= 12, normal approximation above. Throws TooFewPairs when
/// fewer than 5 nonzero differences remain.
double wilcoxon_one_sided(const std::vector<double>& x, const std::vector<double>& y);

enum class Verdict : std::uint8_t { Green, Gray, Red };

std::string to_string(Verdict v);

/// Green for p <= 0.05, Red for p >= 0.95, Gray between.
Verdict verdict(double p);

struct Aggregate {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // n - 1 denominator; 0 with `degenerate` when n == 1
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  bool degenerate = false;
};

/// Mean, SD and mean +- 1.96 SD / sqrt(n) over the present (non-NaN)
/// values. Independent of input order.
Aggregate aggregate(std::vector<double> values);

struct SignificanceCell {
  std::string problem;
  protocol::Method left;
  protocol::Method right;
  double p = 0.0;  // NaN when too few nonzero pairs
  Verdict verdict = Verdict::Gray;
};

/// Ens>GA, Ens>BF, Ens>SA, GA>BF, GA>SA, BF>SA.
inline constexpr std::array<std::pair<protocol::Method, protocol::Method>, 6> kComparisons = {{
    {protocol::Method::Ens, protocol::Method::GA},
    {protocol::Method::Ens, protocol::Method::BF},
    {protocol::Method::Ens, protocol::Method::SA},
    {protocol::Method::GA, protocol::Method::BF},
    {protocol::Method::GA, protocol::Method::SA},
    {protocol::Method::BF, protocol::Method::SA},
}};

/// Per problem and comparison, tests the final-checkpoint best scores paired
/// by trial. Pairs whose methods are missing are skipped; a test with too few
/// nonzero differences yields p = NaN and Gray.
std::vector<SignificanceCell> significance_table(const std::vector<protocol::ExperimentRecord>& records);

/// Writes summary.csv, summary.json, aggregate_curves.csv, significance.csv
/// and plots/*.svg under `out_dir`.
void emit_reports(const std::vector<protocol::ExperimentRecord>& records, const std::filesystem::path& out_dir);

}  // namespace bugamp::stats
