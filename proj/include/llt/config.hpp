#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "llt/bounds.hpp"
#include "llt/distributions.hpp"

namespace llt {

enum class CheckGroup
{
  isotropy,
  separation,
  subadditivity,
  cf_norms,
  cf_product,
  theorems,
  corollary,
  rates
};

std::string
to_string(CheckGroup group);

//! Throws ParameterError for an unknown name.
CheckGroup
check_group_from_string(std::string_view name);

//! Comma-separated list of group names.
std::set<CheckGroup>
parse_check_list(std::string_view list);

const std::vector<CheckGroup>&
all_check_groups();

struct ExperimentConfig
{
  std::string name;
  std::vector<FamilyParams> families;
  int dim = 1;
  std::vector<long long> n_list;
  BoundMode mode = BoundMode::general;
  BoundConstants constants;
  double cf_c = 0.125;
  std::optional<double> half_width;       //!< grid L override
  std::optional<long long> points_per_axis; //!< grid N override

  std::vector<DistributionSpec> summands() const;
  //! Grid with the defaults of the dimension filled in.
  GridSpec grid() const;
  Experiment build() const;
};

struct RunConfig
{
  std::vector<ExperimentConfig> experiments;
  std::string output_dir = "llt-out";
  std::set<CheckGroup> checks;
  std::map<std::string, double> tolerances;

  double tolerance(const std::string& key) const;
};

//! Built-in tolerance keys and their defaults.
const std::map<std::string, double>&
default_tolerances();

//! Parses the YAML experiment description documented in the README.
//! Errors carry the offending line.
RunConfig
parse_config(const std::string& text);

RunConfig
load_config(const std::string& path);

} // namespace llt
