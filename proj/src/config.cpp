#include "llt/config.hpp"

#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "llt/errors.hpp"
#include "llt/numerics.hpp"

namespace llt {

namespace {

const std::vector<std::pair<CheckGroup, std::string>>&
group_names()
{
  static const std::vector<std::pair<CheckGroup, std::string>> names{
    { CheckGroup::isotropy, "isotropy" },
    { CheckGroup::separation, "separation" },
    { CheckGroup::subadditivity, "subadditivity" },
    { CheckGroup::cf_norms, "cf_norms" },
    { CheckGroup::cf_product, "cf_product" },
    { CheckGroup::theorems, "theorems" },
    { CheckGroup::corollary, "corollary" },
    { CheckGroup::rates, "rates" },
  };
  return names;
}

int
line_of(const YAML::Node& node)
{
  return node.Mark().line >= 0 ? node.Mark().line + 1 : 0;
}

[[noreturn]] void
fail(const YAML::Node& node, const std::string& what)
{
  throw ParseError(what, line_of(node));
}

void
require_keys(const YAML::Node& map,
             const std::set<std::string>& allowed,
             const std::string& where)
{
  if (!map.IsMap())
    fail(map, where + " must be a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key))
      fail(kv.first, "unknown key '" + key + "' in " + where);
  }
}

template<class T>
T
scalar(const YAML::Node& node, const std::string& what)
{
  if (!node.IsScalar())
    fail(node, what + " must be a scalar");
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(node, "invalid value '" + node.Scalar() + "' for " + what);
  }
}

FamilyParams
parse_family(const YAML::Node& node, int dim)
{
  FamilyParams p;
  p.dim = dim;
  if (node.IsScalar()) {
    p.id = node.as<std::string>();
  } else {
    require_keys(node, { "id", "sigma", "components", "c" }, "family");
    if (!node["id"])
      fail(node, "family entry needs an id");
    p.id = scalar<std::string>(node["id"], "id");
    if (node["sigma"])
      p.sigma = scalar<double>(node["sigma"], "sigma");
    if (node["c"])
      p.c = scalar<double>(node["c"], "c");
    if (const auto comps = node["components"]) {
      if (!comps.IsSequence())
        fail(comps, "components must be a list");
      for (const auto& c : comps)
        p.components.push_back(scalar<std::string>(c, "component"));
    }
  }
  const auto& catalog = FamilyCatalog::instance();
  if (!catalog.contains(p.id))
    fail(node, "unknown family '" + p.id + "'");
  for (const auto& c : p.components)
    if (!catalog.contains(c))
      fail(node, "unknown component family '" + c + "'");
  if (!(p.sigma > 0.0))
    fail(node, "sigma must be positive");
  return p;
}

const std::set<std::string> experiment_keys{ "name", "family", "families", "d",
                                             "n_list", "mode", "constants", "grid",
                                             "cf_c" };

ExperimentConfig
parse_experiment(const YAML::Node& node,
                 std::size_t index,
                 const std::set<std::string>& allowed = experiment_keys)
{
  require_keys(node, allowed, "experiment");
  ExperimentConfig e;
  if (node["d"])
    e.dim = scalar<int>(node["d"], "d");
  if (e.dim < 1 || e.dim > 3)
    fail(node["d"], "d must be 1, 2 or 3");

  if (node["family"] && node["families"])
    fail(node, "give either family or families, not both");
  if (const auto f = node["family"]) {
    e.families.push_back(parse_family(f, e.dim));
  } else if (const auto fs = node["families"]) {
    if (!fs.IsSequence() || fs.size() == 0)
      fail(fs, "families must be a non-empty list");
    for (const auto& f : fs)
      e.families.push_back(parse_family(f, e.dim));
  } else {
    fail(node, "experiment needs a family");
  }

  const auto nl = node["n_list"];
  if (!nl)
    fail(node, "experiment needs an n_list");
  if (!nl.IsSequence() || nl.size() == 0)
    fail(nl, "n_list must be a non-empty list");
  for (const auto& v : nl) {
    const auto n = scalar<long long>(v, "n_list entry");
    if (n < 1)
      fail(v, "n_list entries must be positive");
    if (!e.n_list.empty() && n <= e.n_list.back())
      fail(v, "n_list must be strictly increasing");
    e.n_list.push_back(n);
  }

  if (const auto m = node["mode"]) {
    const auto s = scalar<std::string>(m, "mode");
    if (s == "general")
      e.mode = BoundMode::general;
    else if (s == "symmetric")
      e.mode = BoundMode::symmetric;
    else
      fail(m, "mode must be general or symmetric");
  }
  if (const auto c = node["constants"]) {
    require_keys(c, { "C", "c" }, "constants");
    if (c["C"])
      e.constants.C = scalar<double>(c["C"], "C");
    if (c["c"])
      e.constants.c = scalar<double>(c["c"], "c");
    if (!(e.constants.C > 0.0) || !(e.constants.c > 0.0))
      fail(c, "constants must be positive");
  }
  if (node["cf_c"]) {
    e.cf_c = scalar<double>(node["cf_c"], "cf_c");
    if (!(e.cf_c > 0.0))
      fail(node["cf_c"], "cf_c must be positive");
  }
  if (const auto g = node["grid"]) {
    require_keys(g, { "N", "L" }, "grid");
    if (g["N"]) {
      const auto N = scalar<long long>(g["N"], "N");
      if (!num::is_power_of_two(N) || N < 64)
        fail(g["N"], "N must be a power of two >= 64, got " + std::to_string(N));
      e.points_per_axis = N;
    }
    if (g["L"]) {
      const auto L = scalar<double>(g["L"], "L");
      if (!(L > 0.0))
        fail(g["L"], "L must be positive");
      e.half_width = L;
    }
  }

  std::vector<DistributionSpec> specs;
  try {
    specs = e.summands();
  } catch (const Error& err) {
    fail(node, err.what());
  }
  if (e.mode == BoundMode::symmetric)
    for (const auto& s : specs)
      if (!s.third_moments_vanish)
        fail(node["mode"],
             "mode symmetric needs vanishing third moments; '" + s.name + "' has nonzero ones");

  if (node["name"]) {
    e.name = scalar<std::string>(node["name"], "name");
  } else {
    for (std::size_t i = 0; i < e.families.size(); ++i)
      e.name += (i ? "+" : "") + e.families[i].id;
    e.name += "-d" + std::to_string(e.dim) + "-" + to_string(e.mode);
  }
  if (e.name.empty())
    e.name = "experiment-" + std::to_string(index);
  return e;
}

} // namespace

std::string
to_string(CheckGroup group)
{
  for (const auto& [g, name] : group_names())
    if (g == group)
      return name;
  return "unknown";
}

CheckGroup
check_group_from_string(std::string_view name)
{
  for (const auto& [g, n] : group_names())
    if (n == name)
      return g;
  throw ParameterError("unknown check group '" + std::string(name) + "'");
}

std::set<CheckGroup>
parse_check_list(std::string_view list)
{
  std::set<CheckGroup> out;
  std::size_t pos = 0;
  while (pos <= list.size()) {
    const auto comma = list.find(',', pos);
    auto item = list.substr(pos, comma == std::string_view::npos ? list.npos : comma - pos);
    while (!item.empty() && item.front() == ' ')
      item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ')
      item.remove_suffix(1);
    if (item == "all") {
      for (auto g : all_check_groups())
        out.insert(g);
    } else if (!item.empty()) {
      out.insert(check_group_from_string(item));
    }
    if (comma == std::string_view::npos)
      break;
    pos = comma + 1;
  }
  if (out.empty())
    throw ParameterError("empty check list");
  return out;
}

const std::vector<CheckGroup>&
all_check_groups()
{
  static const std::vector<CheckGroup> all = [] {
    std::vector<CheckGroup> v;
    for (const auto& [g, name] : group_names())
      v.push_back(g);
    return v;
  }();
  return all;
}

std::vector<DistributionSpec>
ExperimentConfig::summands() const
{
  std::vector<DistributionSpec> out;
  for (const auto& f : families)
    out.push_back(FamilyCatalog::instance().make(f));
  return out;
}

GridSpec
ExperimentConfig::grid() const
{
  const auto specs = summands();
  double sigma = 0.0;
  for (const auto& s : specs)
    sigma = std::max(sigma, s.sigma());
  auto g = default_grid(dim, sigma);
  if (half_width)
    g.half_width = *half_width;
  if (points_per_axis)
    g.points_per_axis = *points_per_axis;
  return g;
}

Experiment
ExperimentConfig::build() const
{
  Experiment e;
  e.name = name;
  e.summands = summands();
  e.n_list = n_list;
  e.grid = grid();
  e.constants = constants;
  e.mode = mode;
  e.cf_c = cf_c;
  return e;
}

const std::map<std::string, double>&
default_tolerances()
{
  static const std::map<std::string, double> t{
    { "isotropy", 1e-9 },
    { "plancherel_d1", 1e-6 },
    { "plancherel_d2", 1e-5 },
    { "lp_norm", 1e-8 },
    { "separation_eps", 0.5 },
    { "gaussian_delta", 1e-7 },
    { "cf_product_stability", 2.0 },
    { "rate_symmetric", 0.15 },
    { "rate_general", 0.1 },
    { "rate_multivariate", 0.25 },
    { "rate_gap", 0.25 },
    { "corollary_stability", 0.2 },
    { "bound_growth", 1.5 },
    { "beta3_cap", 3.0 },
    { "beta4_cap", 12.0 },
  };
  return t;
}

double
RunConfig::tolerance(const std::string& key) const
{
  if (auto it = tolerances.find(key); it != tolerances.end())
    return it->second;
  const auto& d = default_tolerances();
  if (auto it = d.find(key); it != d.end())
    return it->second;
  throw ParameterError("unknown tolerance '" + key + "'");
}

RunConfig
parse_config(const std::string& text)
{
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ParseError(e.msg, e.mark.line + 1);
  }
  if (!root || root.IsNull())
    throw ParseError("configuration is empty", 0);
  if (!root.IsMap())
    fail(root, "configuration must be a mapping");

  RunConfig cfg;
  std::set<std::string> top{ "output_dir", "checks", "tolerances", "experiments" };
  const bool shorthand = !root["experiments"];
  if (shorthand)
    top.insert(experiment_keys.begin(), experiment_keys.end());
  require_keys(root, top, "configuration");

  if (root["output_dir"])
    cfg.output_dir = scalar<std::string>(root["output_dir"], "output_dir");
  if (const auto c = root["checks"]) {
    if (!c.IsSequence())
      fail(c, "checks must be a list");
    for (const auto& item : c) {
      const auto name = scalar<std::string>(item, "check group");
      try {
        if (name == "all")
          for (auto g : all_check_groups())
            cfg.checks.insert(g);
        else
          cfg.checks.insert(check_group_from_string(name));
      } catch (const ParameterError& e) {
        fail(item, e.what());
      }
    }
  } else {
    cfg.checks.insert(all_check_groups().begin(), all_check_groups().end());
  }
  if (const auto t = root["tolerances"]) {
    if (!t.IsMap())
      fail(t, "tolerances must be a mapping");
    for (const auto& kv : t) {
      const auto key = kv.first.as<std::string>();
      if (!default_tolerances().count(key))
        fail(kv.first, "unknown tolerance '" + key + "'");
      cfg.tolerances[key] = scalar<double>(kv.second, key);
    }
  }

  if (shorthand) {
    if (!root["family"] && !root["families"])
      fail(root, "configuration has no experiments");
    cfg.experiments.push_back(parse_experiment(root, 0, top));
  } else {
    const auto exps = root["experiments"];
    if (!exps.IsSequence() || exps.size() == 0)
      fail(exps, "experiments must be a non-empty list");
    std::set<std::string> names;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      cfg.experiments.push_back(parse_experiment(exps[i], i));
      if (!names.insert(cfg.experiments.back().name).second)
        fail(exps[i], "duplicate experiment name '" + cfg.experiments.back().name + "'");
    }
  }
  return cfg;
}

RunConfig
load_config(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw IoError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

} // namespace llt
