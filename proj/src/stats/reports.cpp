#include "bugamp/stats/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bugamp::stats {

namespace {

using protocol::ExperimentRecord;
using protocol::format_number;
using protocol::Method;

/// Problems in order of first appearance.
std::vector<std::string> problems_of(const std::vector<ExperimentRecord>& records) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& r : records)
    if (seen.insert(r.problem).second) out.push_back(r.problem);
  return out;
}

std::vector<Method> methods_of(const std::vector<ExperimentRecord>& records) {
  std::set<Method> seen;
  for (const auto& r : records) seen.insert(r.method);
  std::vector<Method> out;
  for (Method m : protocol::kAllMethods)
    if (seen.count(m)) out.push_back(m);
  return out;
}

/// trial -> best score at the last checkpoint of (method, problem).
std::map<std::uint64_t, double> final_best(const std::vector<ExperimentRecord>& records, Method m,
                                           const std::string& problem) {
  std::map<std::uint64_t, std::pair<std::uint64_t, double>> last;
  for (const auto& r : records) {
    if (r.method != m || r.problem != problem) continue;
    auto it = last.find(r.trial);
    if (it == last.end() || r.checkpoint >= it->second.first) last[r.trial] = {r.checkpoint, r.best_score};
  }
  std::map<std::uint64_t, double> out;
  for (const auto& [t, v] : last) out[t] = v.second;
  return out;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  return f;
}

void close_out(std::ofstream& f, const std::filesystem::path& path) {
  f.close();
  if (!f) throw Error("failed writing " + path.string());
}

const char* method_color(Method m) {
  switch (m) {
    case Method::BF: return "#1f77b4";
    case Method::SA: return "#ff7f0e";
    case Method::GA: return "#2ca02c";
    case Method::Ens: return "#d62728";
  }
  return "#000000";
}

struct Series {
  Method method;
  std::vector<std::pair<double, double>> points;  // (checkpoint, mean)
};

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

/// Mean score against checkpoint, one polyline per method, y in [0, 1].
std::string line_svg(const std::string& title, const std::vector<Series>& series) {
  const double W = 640, H = 400, L = 60, R = 120, T = 40, B = 50;
  double xmax = 1;
  for (const auto& s : series)
    for (const auto& p : s.points) xmax = std::max(xmax, p.first);
  auto px = [&](double x) { return L + (W - L - R) * x / xmax; };
  auto py = [&](double y) { return H - B - (H - T - B) * std::clamp(y, 0.0, 1.0); };
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << px(xmax) << "\" y2=\"" << py(0)
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << py(0) << "\" x2=\"" << L << "\" y2=\"" << py(1) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = i / 4.0;
    o << "<text x=\"" << L - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\" font-size=\"11\">" << fmt2(y)
      << "</text>\n";
  }
  o << "<text x=\"" << px(xmax) << "\" y=\"" << H - B + 20 << "\" text-anchor=\"end\" font-size=\"11\">"
    << format_number(xmax) << "</text>\n";
  o << "<text x=\"" << (L + px(xmax)) / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\" font-size=\"12\">Number of test-cases</text>\n";
  int row = 0;
  for (const auto& s : series) {
    o << "<polyline fill=\"none\" stroke=\"" << method_color(s.method) << "\" stroke-width=\"2\" points=\"";
    for (const auto& p : s.points)
      if (!std::isnan(p.second)) o << fmt2(px(p.first)) << ',' << fmt2(py(p.second)) << ' ';
    o << "\"/>\n";
    const double ly = T + 20 + 18 * row++;
    o << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly
      << "\" stroke=\"" << method_color(s.method) << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << W - R + 36 << "\" y=\"" << ly + 4 << "\" font-size=\"12\">" << protocol::to_string(s.method)
      << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

/// Grouped bars: per method, mean best / 5th / 10th at the last checkpoint.
std::string bar_svg(const std::string& title, const std::vector<std::pair<Method, std::array<double, 3>>>& groups) {
  const double W = 640, H = 400, L = 60, T = 40, B = 50;
  const double plot_w = W - L - 20, plot_h = H - T - B;
  const double gw = plot_w / std::max<std::size_t>(1, groups.size());
  const char* shades[3] = {"#333333", "#777777", "#bbbbbb"};
  const char* labels[3] = {"best", "5th", "10th"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << title << "</text>\n";
  o << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - 20 << "\" y2=\"" << H - B
    << "\" stroke=\"black\"/>\n";
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double x0 = L + gw * static_cast<double>(g) + gw * 0.15;
    const double bw = gw * 0.7 / 3;
    for (int k = 0; k < 3; ++k) {
      const double v = groups[g].second[static_cast<std::size_t>(k)];
      if (std::isnan(v)) continue;
      const double h = plot_h * std::clamp(v, 0.0, 1.0);
      o << "<rect x=\"" << fmt2(x0 + bw * k) << "\" y=\"" << fmt2(H - B - h) << "\" width=\"" << fmt2(bw)
        << "\" height=\"" << fmt2(h) << "\" fill=\"" << shades[k] << "\"><title>" << labels[k] << "</title></rect>\n";
    }
    o << "<text x=\"" << fmt2(x0 + gw * 0.35) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << protocol::to_string(groups[g].first) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace

std::vector<SignificanceCell> significance_table(const std::vector<ExperimentRecord>& records) {
  std::vector<SignificanceCell> out;
  const auto methods = methods_of(records);
  auto has = [&](Method m) { return std::find(methods.begin(), methods.end(), m) != methods.end(); };
  for (const auto& problem : problems_of(records)) {
    for (const auto& [left, right] : kComparisons) {
      if (!has(left) || !has(right)) continue;
      const auto a = final_best(records, left, problem);
      const auto b = final_best(records, right, problem);
      std::vector<double> x, y;
      for (const auto& [t, v] : a) {
        auto it = b.find(t);
        if (it == b.end() || std::isnan(v) || std::isnan(it->second)) continue;
        x.push_back(v);
        y.push_back(it->second);
      }
      SignificanceCell cell{problem, left, right, protocol::kAbsent, Verdict::Gray};
      try {
        cell.p = wilcoxon_one_sided(x, y);
        cell.verdict = verdict(cell.p);
      } catch (const TooFewPairs&) {
      }
      out.push_back(cell);
    }
  }
  return out;
}

void emit_reports(const std::vector<ExperimentRecord>& records, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "plots", ec);
  if (ec) throw Error("cannot create " + (out_dir / "plots").string() + ": " + ec.message());

  const auto problems = problems_of(records);
  const auto methods = methods_of(records);

  // (method, problem, checkpoint) -> scores per metric
  using Key = std::tuple<Method, std::string, std::uint64_t>;
  std::map<Key, std::array<std::vector<double>, 3>> groups;
  std::map<std::pair<Method, std::uint64_t>, std::vector<double>> curves;
  for (const auto& r : records) {
    auto& g = groups[{r.method, r.problem, r.checkpoint}];
    g[0].push_back(r.best_score);
    g[1].push_back(r.fifth_score);
    g[2].push_back(r.tenth_score);
    curves[{r.method, r.checkpoint}].push_back(r.best_score);
  }

  const char* metric_names[3] = {"best", "fifth", "tenth"};
  {
    const auto path = out_dir / "summary.csv";
    auto f = open_out(path);
    f << "method,problem,checkpoint,metric,n,mean,sd,ci_lo,ci_hi,degenerate\n";
    nlohmann::ordered_json js = nlohmann::ordered_json::array();
    for (const auto& problem : problems) {
      for (Method m : methods) {
        nlohmann::ordered_json entry;
        entry["method"] = protocol::to_string(m);
        entry["problem"] = problem;
        entry["checkpoints"] = nlohmann::ordered_json::array();
        for (const auto& [key, g] : groups) {
          if (std::get<0>(key) != m || std::get<1>(key) != problem) continue;
          nlohmann::ordered_json cp;
          cp["checkpoint"] = std::get<2>(key);
          for (int k = 0; k < 3; ++k) {
            const Aggregate a = aggregate(g[static_cast<std::size_t>(k)]);
            f << protocol::to_string(m) << ',' << problem << ',' << std::get<2>(key) << ',' << metric_names[k] << ','
              << a.n << ',' << format_number(a.mean) << ',' << format_number(a.sd) << ',' << format_number(a.ci_lo)
              << ',' << format_number(a.ci_hi) << ',' << (a.degenerate ? 1 : 0) << '\n';
            auto num = [](double v) { return std::isnan(v) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(v); };
            cp[metric_names[k]] = {{"n", a.n},          {"mean", num(a.mean)},   {"sd", num(a.sd)},
                                   {"ci_lo", num(a.ci_lo)}, {"ci_hi", num(a.ci_hi)}, {"degenerate", a.degenerate}};
          }
          entry["checkpoints"].push_back(cp);
        }
        if (!entry["checkpoints"].empty()) js.push_back(entry);
      }
    }
    close_out(f, path);
    const auto jpath = out_dir / "summary.json";
    auto jf = open_out(jpath);
    jf << js.dump(2) << '\n';
    close_out(jf, jpath);
  }

  {
    const auto path = out_dir / "aggregate_curves.csv";
    auto f = open_out(path);
    f << "method,checkpoint,n,mean,sd,ci_lo,ci_hi\n";
    for (Method m : methods)
      for (const auto& [key, v] : curves) {
        if (key.first != m) continue;
        const Aggregate a = aggregate(v);
        f << protocol::to_string(m) << ',' << key.second << ',' << a.n << ',' << format_number(a.mean) << ','
          << format_number(a.sd) << ',' << format_number(a.ci_lo) << ',' << format_number(a.ci_hi) << '\n';
      }
    close_out(f, path);
  }

  {
    const auto path = out_dir / "significance.csv";
    auto f = open_out(path);
    f << "problem,left,right,p,verdict\n";
    for (const auto& c : significance_table(records))
      f << c.problem << ',' << protocol::to_string(c.left) << ',' << protocol::to_string(c.right) << ','
        << format_number(c.p) << ',' << to_string(c.verdict) << '\n';
    close_out(f, path);
  }

  auto write_text = [](const std::filesystem::path& path, const std::string& text) {
    auto f = open_out(path);
    f << text;
    close_out(f, path);
  };
  for (const auto& problem : problems) {
    std::vector<Series> series;
    for (Method m : methods) {
      Series s{m, {}};
      for (const auto& [key, g] : groups)
        if (std::get<0>(key) == m && std::get<1>(key) == problem)
          s.points.emplace_back(static_cast<double>(std::get<2>(key)), aggregate(g[0]).mean);
      series.push_back(std::move(s));
    }
    write_text(out_dir / "plots" / (problem + ".svg"), line_svg(problem + ": mean best score", series));
  }
  std::vector<Series> agg;
  for (Method m : methods) {
    Series s{m, {}};
    for (const auto& [key, v] : curves)
      if (key.first == m) s.points.emplace_back(static_cast<double>(key.second), aggregate(v).mean);
    agg.push_back(std::move(s));
  }
  write_text(out_dir / "plots" / "aggregate.svg", line_svg("All problems: mean best score", agg));

  std::vector<std::pair<Method, std::array<double, 3>>> bars;
  for (Method m : methods) {
    std::array<std::vector<double>, 3> v;
    std::map<std::pair<std::string, std::uint64_t>, const ExperimentRecord*> last;
    for (const auto& r : records) {
      if (r.method != m) continue;
      auto& slot = last[{r.problem, r.trial}];
      if (!slot || r.checkpoint >= slot->checkpoint) slot = &r;
    }
    for (const auto& [_, r] : last) {
      v[0].push_back(r->best_score);
      v[1].push_back(r->fifth_score);
      v[2].push_back(r->tenth_score);
    }
    bars.push_back({m, {aggregate(v[0]).mean, aggregate(v[1]).mean, aggregate(v[2]).mean}});
  }
  write_text(out_dir / "plots" / "topk.svg", bar_svg("Final checkpoint: best, 5th and 10th", bars));
}

}  // namespace bugamp::stats
