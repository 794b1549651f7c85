#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "derived_fixtures.hpp"
#include "llt/config.hpp"
#include "llt/distributions.hpp"
#include "llt/errors.hpp"
#include "llt/runner.hpp"
#include "oracles.hpp"

namespace {

int
cmd_run(const std::string& path, const std::string& out, const std::string& checks, int jobs)
{
  auto config = llt::load_config(path);
  if (!checks.empty())
    config.checks = llt::parse_check_list(checks);
  llt::RunOptions options;
  options.output_dir = out;
  options.jobs = jobs;
  const auto summary = llt::run(config, options);
  for (const auto& [group, count] : summary.counts)
    std::printf("%-14s pass %4d  fail %4d\n", llt::to_string(group).c_str(), count.pass,
                count.fail);
  for (const auto& r : summary.results)
    if (!r.pass)
      std::printf("FAIL %s/%s %s n=%lld observed=%.6e %s %.6e %s\n",
                  llt::to_string(r.group).c_str(), r.check.c_str(), r.family.c_str(), r.n,
                  r.observed, r.relation.c_str(), r.required, r.detail.c_str());
  std::printf("%d passed, %d failed\n", summary.passed(), summary.failed());
  return summary.ok() ? 0 : 1;
}

int
cmd_families()
{
  for (const auto& f : llt::FamilyCatalog::instance().families()) {
    std::string dims;
    for (int d : f.dims)
      dims += (dims.empty() ? "" : ",") + std::to_string(d);
    std::printf("%-22s d=%-6s %s\n", f.id.c_str(), dims.c_str(), f.description.c_str());
  }
  return 0;
}

int
cmd_verify_fixtures()
{
  int failures = 0;
  for (const auto& frozen : fixtures::table) {
    const oracle::Fixture* fx = nullptr;
    for (const auto& f : oracle::registry())
      if (f.id == frozen.id)
        fx = &f;
    if (!fx) {
      std::printf("FAIL %-28s no oracle registered\n", std::string(frozen.id).c_str());
      ++failures;
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const double v = fx->compute();
    const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double diff = std::abs(v - frozen.value);
    const bool ok = diff <= frozen.tol;
    failures += ok ? 0 : 1;
    std::printf("%s %-28s oracle=%.15e frozen=%.15e diff=%.2e tol=%.1e (%.1fs)\n",
                ok ? "PASS" : "FAIL", fx->id.c_str(), v, frozen.value, diff, frozen.tol, secs);
  }
  std::printf("%d fixture(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{ "Numerical lab for local limit bounds of normalized sums" };
  app.require_subcommand(1);

  std::string config_path, out_dir, checks;
  int jobs = 1;
  auto* run = app.add_subcommand("run", "run the experiments of a configuration file");
  run->add_option("config", config_path, "YAML configuration")->required();
  run->add_option("--out", out_dir, "output directory (overrides the config)");
  run->add_option("--checks", checks, "comma-separated check groups, or 'all'");
  run->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* families = app.add_subcommand("families", "list the distribution catalog");
  auto* verify = app.add_subcommand("verify-fixtures",
                                    "regenerate reference values with independent oracles");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run)
      return cmd_run(config_path, out_dir, checks, jobs);
    if (*families)
      return cmd_families();
    if (*verify)
      return cmd_verify_fixtures();
  } catch (const llt::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const llt::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return 3;
  } catch (const llt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
