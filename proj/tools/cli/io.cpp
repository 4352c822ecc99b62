#include "io.hpp"

#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "dl2u/errors.hpp"

namespace dl2u::cli {

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_real(const std::string& text, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("line " + std::to_string(line_no) + ": cannot parse '" + text + "'");
  }
  return v;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json to_json(const ModelParams& p) {
  return {{"c", p.c},
          {"d", p.d},
          {"alpha", p.alpha},
          {"n", p.n},
          {"kn", p.kn.to_string()},
          {"rn", p.rn.to_string()},
          {"regime", std::string(to_string(p.regime))},
          {"y0", p.y0},
          {"z0", p.z0}};
}

ModelParams params_from_json(const json& j) {
  ModelParams p;
  try {
    p.c = j.value("c", p.c);
    p.d = j.value("d", p.d);
    p.alpha = j.value("alpha", p.alpha);
    p.n = j.value("n", p.n);
    if (j.contains("kn")) p.kn = SequenceSpec::parse(j.at("kn").get<std::string>());
    if (j.contains("rn")) p.rn = SequenceSpec::parse(j.at("rn").get<std::string>());
    if (j.contains("regime")) p.regime = parse_regime(j.at("regime").get<std::string>());
    p.y0 = j.value("y0", p.y0);
    p.z0 = j.value("z0", p.z0);
  } catch (const json::exception& e) {
    throw UsageError(std::string("malformed parameter metadata: ") + e.what());
  }
  return p;
}

json to_json(const KsResult& r) {
  return {{"d_stat", r.d_stat}, {"p_value", r.p_value}, {"sample_size", r.sample_size}};
}

json to_json(const ExperimentSpec& s) {
  return {{"params", to_json(s.params)},
          {"paths_per_test", s.paths_per_test},
          {"replications", s.replications},
          {"alpha_level", s.alpha_level},
          {"seed_base", s.seed_base}};
}

json to_json(const ExperimentSummary& s) {
  json reps = json::array();
  for (const auto& r : s.per_replication) reps.push_back(to_json(r));
  return {{"mean_ks", s.mean_ks},
          {"acceptance_proportion", s.acceptance_proportion},
          {"per_replication", reps}};
}

json to_json(const Histogram& h) {
  return {{"target", h.target.name()},
          {"edges", h.edges},
          {"counts", h.counts},
          {"overlay_x", h.overlay_x},
          {"overlay_density", h.overlay_density},
          {"empirical_density", h.empirical_density},
          {"total", h.total},
          {"clipped", h.clipped}};
}

json to_json(const MomentCheck& c) {
  return {{"label", c.label},
          {"mc_estimate", c.mc_estimate},
          {"closed_form", c.closed_form},
          {"mc_std_error", c.mc_std_error},
          {"z_score", c.z_score},
          {"pass", c.passed()}};
}

json to_json(const VerifyReport& r) {
  json moments = json::array();
  for (const auto& m : r.moments) moments.push_back(to_json(m));
  json eq6 = json::array();
  for (const auto& e : r.eq6) {
    json entries = json::array();
    for (const auto& x : e.entries) {
      entries.push_back({{"n", x.n}, {"mean", x.mean}, {"std_error", x.std_error},
                         {"abs_error", x.abs_error}});
    }
    eq6.push_back({{"target", e.target}, {"entries", entries}, {"pass", e.passed}});
  }
  json wnvn = json::array();
  for (const auto& w : r.wnvn) {
    wnvn.push_back({{"target_variance", w.target_variance},
                    {"var_w", w.var_w},
                    {"se_var_w", w.se_var_w},
                    {"var_v", w.var_v},
                    {"se_var_v", w.se_var_v},
                    {"correlation", w.correlation},
                    {"se_correlation", w.se_correlation},
                    {"paths", w.paths},
                    {"pass", w.passed}});
  }
  json rates = json::array();
  for (std::size_t i = 0; i < r.rates.size(); ++i) {
    const auto& x = r.rates[i];
    rates.push_back({{"label", i < r.rate_labels.size() ? r.rate_labels[i] : ""},
                     {"second_moment_ratio", x.second_moment_ratio},
                     {"fourth_moment_ratio", x.fourth_moment_ratio},
                     {"questionable", x.flagged}});
  }
  return {{"pass", r.all_passed()},
          {"moment_checks", moments},
          {"eq6_convergence", eq6},
          {"wn_vn", wnvn},
          {"rate_conditions", rates}};
}

void write_path_csv(std::ostream& out, const SimulatedPath& path) {
  out << "t,y,sigma2,u\n";
  for (std::size_t t = 0; t < path.y.size(); ++t) {
    out << t << ',' << format_real(path.y[t]) << ',' << format_real(path.sigma2[t]) << ',';
    if (t > 0) out << format_real(path.u[t - 1]);
    out << '\n';
  }
}

SimulatedPath read_path_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty path file");
  const auto header = split(strip_cr(line), ',');
  int col_y = -1, col_s = -1, col_u = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "y") col_y = static_cast<int>(i);
    if (header[i] == "sigma2") col_s = static_cast<int>(i);
    if (header[i] == "u") col_u = static_cast<int>(i);
  }
  if (col_y < 0) throw InputError("path file has no 'y' column");

  SimulatedPath path;
  bool have_u = col_u >= 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    auto field = [&](int col) -> const std::string& {
      if (col >= static_cast<int>(fields.size())) {
        throw InputError("line " + std::to_string(line_no) + ": missing column");
      }
      return fields[static_cast<std::size_t>(col)];
    };
    path.y.push_back(parse_real(field(col_y), line_no));
    path.sigma2.push_back(col_s >= 0 ? parse_real(field(col_s), line_no) : 1.0);
    if (have_u && path.y.size() > 1) {
      const std::string& u = field(col_u);
      if (u.empty()) {
        have_u = false;
        path.u.clear();
      } else {
        path.u.push_back(parse_real(u, line_no));
      }
    }
  }
  if (!have_u) path.u.clear();
  return path;
}

void write_table_csv(std::ostream& out, const std::vector<TableRow>& rows) {
  out << "kn,mean_ks,acceptance\n";
  for (const auto& r : rows) {
    out << r.kn << ',' << format_real(r.summary.mean_ks) << ','
        << format_real(r.summary.acceptance_proportion) << '\n';
  }
}

}  // namespace dl2u::cli
