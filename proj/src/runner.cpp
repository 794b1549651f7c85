#include "llt/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <future>
#include <limits>
#include <map>
#include <sstream>

#include "llt/bounds.hpp"
#include "llt/cf_analysis.hpp"
#include "llt/errors.hpp"
#include "llt/functionals.hpp"
#include "llt/report_io.hpp"

namespace llt {

int
RunSummary::passed() const
{
  int total = 0;
  for (const auto& [g, c] : counts)
    total += c.pass;
  return total;
}

int
RunSummary::failed() const
{
  int total = 0;
  for (const auto& [g, c] : counts)
    total += c.fail;
  return total;
}

namespace {

namespace fs = std::filesystem;

//! Runs fn(i) for i < count on up to `jobs` threads; results keep the
//! index order.
template<class T>
std::vector<T>
parallel_map(std::size_t count, int jobs, const std::function<T(std::size_t)>& fn)
{
  std::vector<T> out(count);
  jobs = std::max(1, jobs);
  for (std::size_t start = 0; start < count; start += jobs) {
    const std::size_t stop = std::min(count, start + static_cast<std::size_t>(jobs));
    if (jobs == 1) {
      out[start] = fn(start);
      continue;
    }
    std::vector<std::future<T>> pending;
    for (std::size_t i = start; i < stop; ++i)
      pending.push_back(std::async(std::launch::async, fn, i));
    for (std::size_t i = start; i < stop; ++i)
      out[i] = pending[i - start].get();
  }
  return out;
}

std::string
file_stem(const std::string& name)
{
  std::string out;
  for (char ch : name)
    out += std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' ? ch : '_';
  return out;
}

bool
all_gaussian(const std::vector<DistributionSpec>& specs)
{
  return std::all_of(specs.begin(), specs.end(), [](const auto& s) {
    return s.family == FamilyId::gaussian;
  });
}

class Collector
{
public:
  explicit Collector(RunSummary& summary)
    : summary_(summary)
  {}

  void add(CheckGroup group,
           std::string check,
           std::string family,
           long long n,
           double observed,
           double required,
           std::string relation,
           bool pass,
           std::string detail = {})
  {
    summary_.results.push_back({ group, std::move(check), std::move(family), n, observed,
                                 required, std::move(relation), pass, std::move(detail) });
    auto& c = summary_.counts[group];
    (pass ? c.pass : c.fail) += 1;
  }

  //! Records an exception raised while running a check as a failure.
  void error(CheckGroup group,
             const std::string& check,
             const std::string& family,
             long long n,
             const std::exception& e)
  {
    add(group, check, family, n, std::numeric_limits<double>::quiet_NaN(), 0.0, "error",
        false, e.what());
  }

private:
  RunSummary& summary_;
};

struct Stopwatch
{
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const
  {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

//! Homogeneous fixture grid for the simplification step.
void
run_chain(Collector& out)
{
  const double Ms[] = { 0.05, 1.0 / (2.0 * std::sqrt(3.0)), 1.0, 3.0 };
  const double sigmas[] = { 1.0, 1.5, 2.0 };
  const double betas[] = { 1.0, 1.5, 3.0, 10.0 };
  const long long ns[] = { 1, 4, 64, 4096 };
  const BoundConstants K;
  for (auto mode : { BoundMode::general, BoundMode::symmetric }) {
    double worst = 0.0;
    int failures = 0, points = 0;
    for (int d = 1; d <= 3; ++d)
      for (double M : Ms)
        for (double s : sigmas)
          for (double b : betas)
            for (long long n : ns) {
              const auto r = simplification_chain(M, s, b, n, d, K.C, K.c, mode);
              worst = std::max(worst, r.second / r.majorant);
              failures += r.holds ? 0 : 1;
              ++points;
            }
    out.add(CheckGroup::theorems, "simplification_chain_" + to_string(mode), "fixture-grid", 0,
            worst, 1.0, "<=", failures == 0,
            std::to_string(points) + " fixture points");
  }
}

} // namespace

RunSummary
run(const RunConfig& config, const RunOptions& options)
{
  if (config.experiments.empty())
    throw ParameterError("configuration has no experiments");
  RunSummary summary;
  Collector out(summary);
  const auto enabled = [&](CheckGroup g) { return config.checks.count(g) > 0; };
  const fs::path dir = options.output_dir.empty() ? fs::path(config.output_dir)
                                                  : fs::path(options.output_dir);
  if (options.write_outputs) {
    std::error_code ec;
    fs::create_directories(dir / "series", ec);
    if (ec)
      throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  }

  std::vector<Experiment> experiments;
  for (const auto& e : config.experiments)
    experiments.push_back(e.build());

  // Distinct families in order of first appearance.
  std::vector<DistributionSpec> families;
  for (const auto& e : experiments)
    for (const auto& s : e.summands)
      if (std::none_of(families.begin(), families.end(), [&](const auto& f) {
            return f.name == s.name && f.dim == s.dim;
          }))
        families.push_back(s);

  // Isotropy and functionals.
  std::vector<FunctionalRow> functional_rows;
  if (enabled(CheckGroup::isotropy)) {
    Stopwatch sw;
    const double tol = config.tolerance("isotropy");
    auto rows = parallel_map<std::optional<FunctionalRow>>(
      families.size(), options.jobs, [&](std::size_t i) -> std::optional<FunctionalRow> {
        try {
          return FunctionalRow{ functional_report({ families[i] }, 1),
                                check_isotropic_bounds(families[i]) };
        } catch (const Error&) {
          return std::nullopt;
        }
      });
    for (std::size_t i = 0; i < families.size(); ++i) {
      const auto& name = families[i].name;
      if (!rows[i]) {
        out.add(CheckGroup::isotropy, "functionals", name, 0,
                std::numeric_limits<double>::quiet_NaN(), 0.0, "error", false,
                "functional evaluation failed");
        continue;
      }
      const auto& m = rows[i]->margins;
      if (m.interval)
        out.add(CheckGroup::isotropy, "interval_margin", name, 0, *m.interval, -tol, ">=",
                *m.interval >= -tol);
      out.add(CheckGroup::isotropy, "ball_margin", name, 0, m.ball, -tol, ">=",
              m.ball >= -tol);
      out.add(CheckGroup::isotropy, "gaussian_margin", name, 0, m.gaussian, -tol, ">=",
              m.gaussian >= -tol);
      functional_rows.push_back(*rows[i]);
    }
    summary.stage_seconds["isotropy"] = sw.seconds();
  }

  // Separation of |f| from 1.
  std::vector<SeparationReport> separation_rows;
  if (enabled(CheckGroup::separation)) {
    Stopwatch sw;
    const double eps = config.tolerance("separation_eps");
    summary.c_feasible = std::numeric_limits<double>::infinity();
    auto reports = parallel_map<std::optional<SeparationReport>>(
      families.size(), options.jobs, [&](std::size_t i) -> std::optional<SeparationReport> {
        try {
          return separation_scan(families[i], eps);
        } catch (const Error&) {
          return std::nullopt;
        }
      });
    for (std::size_t i = 0; i < families.size(); ++i) {
      const auto& name = families[i].name;
      if (!reports[i]) {
        out.add(CheckGroup::separation, "separation_scan", name, 0,
                std::numeric_limits<double>::quiet_NaN(), 0.0, "error", false,
                "scan failed");
        continue;
      }
      const auto& r = *reports[i];
      out.add(CheckGroup::separation, "c_empirical_positive", name, 0, r.c_empirical, 0.0, ">",
              r.c_empirical > 0.0);
      out.add(CheckGroup::separation, "window_certified", name, 0, r.beyond_window_bound,
              r.delta_f, "<", r.certified);
      summary.c_feasible = std::min(summary.c_feasible, r.c_empirical);
      separation_rows.push_back(r);
    }
    summary.stage_seconds["separation"] = sw.seconds();
  }

  // Subadditivity over all pairs and triples of same-dimension families.
  if (enabled(CheckGroup::subadditivity)) {
    Stopwatch sw;
    for (int d = 1; d <= 3; ++d) {
      std::vector<DistributionSpec> pool;
      for (const auto& f : families)
        if (f.dim == d)
          pool.push_back(f);
      if (pool.empty())
        continue;
      try {
        SubadditivityLab lab(pool);
        std::vector<std::vector<std::size_t>> groups;
        for (std::size_t i = 0; i < pool.size(); ++i)
          for (std::size_t j = i; j < pool.size(); ++j) {
            groups.push_back({ i, j });
            for (std::size_t k = j; k < pool.size(); ++k)
              groups.push_back({ i, j, k });
          }
        for (const auto& g : groups) {
          std::string label;
          for (std::size_t i : g)
            label += (label.empty() ? "" : "+") + pool[i].name;
          try {
            const auto r = lab.check(g);
            out.add(CheckGroup::subadditivity, "harmonic_1_over_e", label, 0, r.lhs,
                    r.harmonic_rhs, ">=", r.harmonic_ok);
            out.add(CheckGroup::subadditivity, "geometric_mean", label, 0, r.M_sum,
                    r.geometric_rhs, "<=", r.geometric_ok);
            if (d == 1)
              out.add(CheckGroup::subadditivity, "harmonic_1_over_2", label, 0, r.lhs,
                      r.half_rhs, ">=", r.half_ok);
          } catch (const Error& e) {
            out.error(CheckGroup::subadditivity, "subadditivity", label, 0, e);
          }
        }
      } catch (const Error& e) {
        out.error(CheckGroup::subadditivity, "subadditivity", "d=" + std::to_string(d), 0, e);
      }
    }
    summary.stage_seconds["subadditivity"] = sw.seconds();
  }

  // L^{2m} norms of f and the Plancherel identity.
  if (enabled(CheckGroup::cf_norms)) {
    Stopwatch sw;
    const double tol = config.tolerance("lp_norm");
    for (const auto& f : families) {
      try {
        for (int m : { 1, 2, 4, 8, 16 }) {
          const double v = lp_norm_cf(f, m), env = lp_norm_envelope(f, m);
          out.add(CheckGroup::cf_norms, "lp_norm_m" + std::to_string(m), f.name, 0, v,
                  env + tol, "<=", v <= env + tol);
        }
        // The region example's transform decays too unevenly for the
        // identity to be resolved at these tolerances.
        const DistributionSpec* base = &f;
        while (base->family == FamilyId::scaled && !base->components.empty())
          base = base->components.front().get();
        if (f.dim <= 2 && base->family != FamilyId::unbounded_marginal) {
          const double lhs = lp_norm_cf(f, 1);
          const double rhs = *symmetrize(f).max_density_closed_form;
          const double t = config.tolerance(f.dim == 1 ? "plancherel_d1" : "plancherel_d2");
          out.add(CheckGroup::cf_norms, "plancherel", f.name, 0, std::abs(lhs - rhs), t,
                  "<=", std::abs(lhs - rhs) <= t);
        }
      } catch (const Error& e) {
        out.error(CheckGroup::cf_norms, "cf_norms", f.name, 0, e);
      }
    }
    summary.stage_seconds["cf_norms"] = sw.seconds();
  }

  // Characteristic functions of Z_n against e^{-t^2/2}.
  if (enabled(CheckGroup::cf_product)) {
    Stopwatch sw;
    const double gauss_tol = config.tolerance("gaussian_delta");
    const double stab = config.tolerance("cf_product_stability");
    for (const auto& e : experiments) {
      std::vector<std::pair<long long, double>> cmins;
      for (long long n : e.n_list) {
        try {
          const auto r = cf_product_error_check(e, n, e.cf_c);
          const bool finite = std::isfinite(r.C_min);
          out.add(CheckGroup::cf_product, "C_min_finite", e.name, n, r.C_min,
                  std::numeric_limits<double>::infinity(), "<", finite);
          if (r.C_min_unit)
            out.add(CheckGroup::cf_product, "C_min_unit_interval", e.name, n, *r.C_min_unit,
                    std::numeric_limits<double>::infinity(), "<", std::isfinite(*r.C_min_unit));
          if (all_gaussian(e.summands))
            out.add(CheckGroup::cf_product, "gaussian_C_min", e.name, n, r.C_min, gauss_tol,
                    "<=", r.C_min <= gauss_tol);
          else if (n >= 8)
            cmins.emplace_back(n, r.C_min);
          if (options.write_outputs)
            emit_cf_series(r, dir / "series" /
                                ("cf_" + file_stem(e.name) + "_n" + std::to_string(n) + ".csv"));
        } catch (const IoError&) {
          throw;
        } catch (const Error& err) {
          out.error(CheckGroup::cf_product, "cf_product", e.name, n, err);
        }
      }
      if (cmins.size() >= 2) {
        const double ratio = cmins.back().second / cmins.front().second;
        out.add(CheckGroup::cf_product, "C_min_stability", e.name, cmins.back().first, ratio,
                stab, "within [1/r, r]", ratio >= 1.0 / stab && ratio <= stab);
      }
    }
    summary.stage_seconds["cf_product"] = sw.seconds();
  }

  // Density bounds, rates.
  std::vector<BoundReport> reports;
  std::vector<bool> report_ok;
  if (enabled(CheckGroup::theorems) || enabled(CheckGroup::rates)) {
    Stopwatch sw;
    auto results = parallel_map<std::optional<BoundReport>>(
      experiments.size(), options.jobs, [&](std::size_t i) -> std::optional<BoundReport> {
        try {
          return verify_bound(experiments[i]);
        } catch (const Error&) {
          return std::nullopt;
        }
      });
    for (std::size_t i = 0; i < experiments.size(); ++i) {
      if (!results[i]) {
        out.add(CheckGroup::theorems, "verify_bound", experiments[i].name, 0,
                std::numeric_limits<double>::quiet_NaN(), 0.0, "error", false,
                "bound verification failed");
        continue;
      }
      reports.push_back(*results[i]);
    }
    summary.stage_seconds["bounds"] = sw.seconds();
  }

  if (enabled(CheckGroup::theorems)) {
    const double gauss_tol = config.tolerance("gaussian_delta");
    for (const auto& r : reports) {
      const auto& exp = *std::find_if(experiments.begin(), experiments.end(),
                                      [&](const auto& e) { return e.name == r.name; });
      const bool gaussian = all_gaussian(exp.summands);
      const bool sym = r.mode == BoundMode::symmetric;
      const double growth = config.tolerance("bound_growth");
      // delta_n n / beta_4 (or delta_n sqrt(n) / beta_3) is the constant the
      // bound needs at this n; it has to stay bounded along n_list.
      double running_max = 0.0;
      for (const auto& rec : r.records) {
        if (!rec.error.empty()) {
          out.add(CheckGroup::theorems, "delta_n", r.name, rec.n,
                  std::numeric_limits<double>::quiet_NaN(), 0.0, "error", false, rec.error);
          continue;
        }
        if (gaussian) {
          out.add(CheckGroup::theorems, "gaussian_delta", r.name, rec.n, rec.delta_n, gauss_tol,
                  "<=", rec.delta_n <= gauss_tol);
          continue;
        }
        const double n = static_cast<double>(rec.n);
        const double q = sym ? rec.delta_n * n / r.functionals.beta4
                             : rec.delta_n * std::sqrt(n) / r.functionals.beta3;
        if (running_max > 0.0)
          out.add(CheckGroup::theorems,
                  sym ? "scaled_distance_n" : "scaled_distance_sqrt_n", r.name, rec.n, q,
                  growth * running_max, "<=", q <= growth * running_max);
        running_max = std::max(running_max, q);
      }
      summary.global_C_min = std::max(summary.global_C_min, r.C_min);
    }
    run_chain(out);
  }

  if (enabled(CheckGroup::corollary)) {
    Stopwatch sw;
    const double stab = config.tolerance("corollary_stability");
    for (const auto& e : experiments) {
      const bool eligible = std::all_of(e.summands.begin(), e.summands.end(), [](const auto& s) {
        return s.log_concave && std::abs(s.sigma() - 1.0) <= 1e-9;
      });
      if (!eligible)
        continue;
      try {
        const auto r =
          corollary12_check(e, config.tolerance("beta3_cap"), config.tolerance("beta4_cap"));
        out.add(CheckGroup::corollary, "beta3_cap", e.name, 0, r.beta3, r.beta3_cap, "<",
                r.beta3 < r.beta3_cap);
        out.add(CheckGroup::corollary, "beta4_cap", e.name, 0, r.beta4, r.beta4_cap, "<",
                r.beta4 < r.beta4_cap);
        out.add(CheckGroup::corollary, "C_d_sqrt_finite", e.name, 0, r.C_d_sqrt,
                std::numeric_limits<double>::infinity(), "<", std::isfinite(r.C_d_sqrt));
        if (r.C_d_linear && r.n_list.size() >= 3 && !all_gaussian(e.summands)) {
          double prefix = 0.0;
          for (std::size_t i = 0; i + 1 < r.n_list.size(); ++i)
            prefix = std::max(prefix, r.delta[i] * static_cast<double>(r.n_list[i]));
          const double change = std::abs(*r.C_d_linear / prefix - 1.0);
          out.add(CheckGroup::corollary, "C_d_linear_stability", e.name, r.n_list.back(),
                  change, stab, "<=", change <= stab);
        }
      } catch (const Error& err) {
        out.error(CheckGroup::corollary, "corollary", e.name, 0, err);
      }
    }
    summary.stage_seconds["corollary"] = sw.seconds();
  }

  if (enabled(CheckGroup::rates)) {
    double worst_symmetric = -std::numeric_limits<double>::infinity();
    double best_general = std::numeric_limits<double>::infinity();
    for (const auto& r : reports) {
      const auto& exp = *std::find_if(experiments.begin(), experiments.end(),
                                      [&](const auto& e) { return e.name == r.name; });
      if (all_gaussian(exp.summands) || r.rate.points < 3)
        continue;
      const bool sym = r.functionals.third_moments_vanish;
      const double target = sym ? -1.0 : -0.5;
      const double tol = config.tolerance(r.dim >= 2 ? "rate_multivariate"
                                          : sym      ? "rate_symmetric"
                                                     : "rate_general");
      const double dev = std::abs(r.rate.slope - target);
      out.add(CheckGroup::rates, sym ? "slope_n_inverse" : "slope_sqrt_n_inverse", r.name, 0,
              r.rate.slope, target, "within " + format_double(tol), dev <= tol,
              r.rate.dropped_smallest ? "smallest n dropped" : "");
      if (sym)
        worst_symmetric = std::max(worst_symmetric, r.rate.slope);
      else
        best_general = std::min(best_general, r.rate.slope);
    }
    if (std::isfinite(worst_symmetric) && std::isfinite(best_general)) {
      const double gap = config.tolerance("rate_gap");
      out.add(CheckGroup::rates, "symmetric_faster", "catalog", 0, worst_symmetric,
              best_general + gap, "<=", worst_symmetric <= best_general + gap);
    }
  }

  if (options.write_outputs) {
    Stopwatch sw;
    auto dump = [&](const std::string& file, auto&& writer) {
      std::ostringstream ss;
      writer(ss);
      write_text_file(dir / file, ss.str());
    };
    dump("bounds.csv", [&](std::ostream& s) { write_bounds_csv(s, reports); });
    dump("functionals.csv", [&](std::ostream& s) { write_functionals_csv(s, functional_rows); });
    dump("separation.csv", [&](std::ostream& s) { write_separation_csv(s, separation_rows); });
    dump("checks.csv", [&](std::ostream& s) { write_checks_csv(s, summary.results); });
    for (const auto& r : reports)
      if (std::any_of(r.records.begin(), r.records.end(),
                      [](const auto& rec) { return rec.error.empty(); }))
        emit_plot_data(r, dir / "series" / ("rate_" + file_stem(r.name) + ".csv"));
    summary.stage_seconds["write"] = sw.seconds();
    dump("summary.json", [&](std::ostream& s) { write_summary_json(s, summary, reports); });
  }
  return summary;
}

} // namespace llt
