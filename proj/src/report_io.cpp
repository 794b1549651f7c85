#include "llt/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "llt/errors.hpp"

namespace llt {

std::string
format_double(double x)
{
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  return buf;
}

std::string
format_optional(const std::optional<double>& x)
{
  return x ? format_double(*x) : std::string();
}

void
write_bounds_csv(std::ostream& out, const std::vector<BoundReport>& reports)
{
  out << "family,d,n,mode,delta_n,rhs_11,rhs_12,rhs_71,rhs_72,ratio,feasible,C_min,error\n";
  for (const auto& r : reports)
    for (const auto& rec : r.records) {
      std::string err = rec.error;
      for (char& ch : err)
        if (ch == ',' || ch == '\n')
          ch = ';';
      out << r.name << ',' << r.dim << ',' << rec.n << ',' << to_string(r.mode) << ','
          << format_double(rec.delta_n) << ',' << format_optional(rec.rhs_11) << ','
          << format_optional(rec.rhs_12) << ',' << format_optional(rec.rhs_71) << ','
          << format_optional(rec.rhs_72) << ',' << format_double(rec.ratio) << ','
          << (rec.feasible ? "true" : "false") << ',' << format_double(r.C_min) << ',' << err
          << '\n';
    }
}

void
write_functionals_csv(std::ostream& out, const std::vector<FunctionalRow>& rows)
{
  out << "family,d,M,sigma,beta3,beta4,beta3_lattice,beta4_lattice,isotropic_const,"
         "margin_interval,margin_ball,margin_gaussian\n";
  for (const auto& row : rows) {
    const auto& r = row.report;
    out << r.family << ',' << r.dim << ',' << format_double(r.M) << ','
        << format_double(r.sigma) << ',' << format_double(r.beta3) << ','
        << format_double(r.beta4) << ',' << format_double(r.beta3_lattice) << ','
        << format_double(r.beta4_lattice) << ',' << format_double(r.isotropic_const) << ','
        << format_optional(row.margins.interval) << ',' << format_double(row.margins.ball)
        << ',' << format_double(row.margins.gaussian) << '\n';
  }
}

void
write_separation_csv(std::ostream& out, const std::vector<SeparationReport>& rows)
{
  out << "family,d,eps,delta_f,c_empirical,t_critical,certified\n";
  for (const auto& r : rows) {
    std::string tc;
    for (std::size_t i = 0; i < r.t_critical.size(); ++i)
      tc += (i ? " " : "") + format_double(r.t_critical[i]);
    out << r.family << ',' << r.dim << ',' << format_double(r.eps) << ','
        << format_double(r.delta_f) << ',' << format_double(r.c_empirical) << ',' << tc << ','
        << (r.certified ? "true" : "false") << '\n';
  }
}

void
write_checks_csv(std::ostream& out, const std::vector<CheckResult>& results)
{
  out << "group,check,family,n,observed,relation,required,pass,detail\n";
  for (const auto& r : results) {
    std::string detail = r.detail;
    for (char& ch : detail)
      if (ch == ',' || ch == '\n')
        ch = ';';
    out << to_string(r.group) << ',' << r.check << ',' << r.family << ',' << r.n << ','
        << format_double(r.observed) << ',' << r.relation << ',' << format_double(r.required)
        << ',' << (r.pass ? "true" : "false") << ',' << detail << '\n';
  }
}

namespace {

nlohmann::json
number(double x)
{
  if (std::isfinite(x))
    return x;
  return format_double(x);
}

} // namespace

void
write_summary_json(std::ostream& out,
                   const RunSummary& summary,
                   const std::vector<BoundReport>& reports)
{
  nlohmann::ordered_json j;
  j["passed"] = summary.passed();
  j["failed"] = summary.failed();
  j["total"] = summary.passed() + summary.failed();
  auto& counts = j["checks"];
  counts = nlohmann::ordered_json::object();
  for (const auto& [g, c] : summary.counts)
    counts[to_string(g)] = { { "pass", c.pass }, { "fail", c.fail } };
  j["global_C_min"] = number(summary.global_C_min);
  j["c_feasible"] = number(summary.c_feasible);
  auto& exps = j["experiments"];
  exps = nlohmann::ordered_json::array();
  for (const auto& r : reports)
    exps.push_back({ { "name", r.name },
                     { "d", r.dim },
                     { "mode", to_string(r.mode) },
                     { "C_min", number(r.C_min) },
                     { "C_min_refined", number(r.C_min_71) },
                     { "rate_slope", number(r.rate.slope) },
                     { "rate_slope_stderr", number(r.rate.stderr_) },
                     { "rate_points", r.rate.points },
                     { "rate_dropped_smallest", r.rate.dropped_smallest } });
  auto& failures = j["failures"];
  failures = nlohmann::ordered_json::array();
  for (const auto& r : summary.results)
    if (!r.pass)
      failures.push_back({ { "family", r.family },
                           { "n", r.n },
                           { "check", to_string(r.group) + "/" + r.check },
                           { "observed", number(r.observed) },
                           { "required", r.relation + " " + format_double(r.required) },
                           { "detail", r.detail } });
  auto& times = j["stage_seconds"];
  times = nlohmann::ordered_json::object();
  for (const auto& [stage, s] : summary.stage_seconds)
    times[stage] = s;
  out << j.dump(2) << '\n';
}

void
write_text_file(const std::filesystem::path& path, const std::string& content)
{
  std::error_code ec;
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f)
    throw IoError("cannot write '" + path.string() + "'");
  f << content;
  if (!f)
    throw IoError("write failed for '" + path.string() + "'");
}

void
emit_plot_data(const BoundReport& report, const std::filesystem::path& path)
{
  if (report.records.empty())
    throw ParameterError("report '" + report.name + "' has no records to plot");
  std::string s = "log_n,log_delta_n\n";
  for (const auto& rec : report.records)
    if (rec.error.empty() && rec.delta_n > 0.0)
      s += format_double(std::log(static_cast<double>(rec.n))) + ',' +
           format_double(std::log(rec.delta_n)) + '\n';
  write_text_file(path, s);
}

void
emit_cf_series(const CfProductRecord& record, const std::filesystem::path& path)
{
  if (record.series.empty())
    throw ParameterError("CF record has no series");
  std::string s = "t,abs_error\n";
  for (const auto& [t, e] : record.series)
    s += format_double(t) + ',' + format_double(e) + '\n';
  write_text_file(path, s);
}

} // namespace llt
