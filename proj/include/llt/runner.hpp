#pragma once

#include <map>
#include <string>
#include <vector>

#include "llt/config.hpp"

namespace llt {

struct CheckResult
{
  CheckGroup group = CheckGroup::isotropy;
  std::string check;
  std::string family;
  long long n = 0; //!< 0 when the check is not tied to one n
  double observed = 0.0;
  double required = 0.0;
  std::string relation; //!< how observed is compared with required
  bool pass = false;
  std::string detail;
};

struct GroupCount
{
  int pass = 0;
  int fail = 0;
};

struct RunSummary
{
  std::vector<CheckResult> results;
  std::map<CheckGroup, GroupCount> counts;
  double global_C_min = 0.0;    //!< largest C_min over the experiments
  double c_feasible = 0.0;      //!< smallest separation c over the families
  std::map<std::string, double> stage_seconds;

  int passed() const;
  int failed() const;
  bool ok() const { return failed() == 0; }
};

struct RunOptions
{
  std::string output_dir; //!< overrides the config when non-empty
  int jobs = 1;
  bool write_outputs = true;
};

//! Executes the enabled check groups and writes the reports. Check
//! failures are collected; I/O errors throw IoError.
RunSummary
run(const RunConfig& config, const RunOptions& options = {});

} // namespace llt
