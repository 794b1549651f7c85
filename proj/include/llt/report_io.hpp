#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "llt/bounds.hpp"
#include "llt/cf_analysis.hpp"
#include "llt/functionals.hpp"
#include "llt/runner.hpp"

namespace llt {

//! 12 significant digits in scientific notation; "nan" / "inf" otherwise.
std::string
format_double(double x);

std::string
format_optional(const std::optional<double>& x);

struct FunctionalRow
{
  FunctionalReport report;
  IsotropyMargins margins;
};

void
write_bounds_csv(std::ostream& out, const std::vector<BoundReport>& reports);

void
write_functionals_csv(std::ostream& out, const std::vector<FunctionalRow>& rows);

void
write_separation_csv(std::ostream& out, const std::vector<SeparationReport>& rows);

void
write_checks_csv(std::ostream& out, const std::vector<CheckResult>& results);

void
write_summary_json(std::ostream& out,
                   const RunSummary& summary,
                   const std::vector<BoundReport>& reports);

//! Rate series (log n, log delta_n). Throws ParameterError for an empty
//! report and IoError when the file cannot be written.
void
emit_plot_data(const BoundReport& report, const std::filesystem::path& path);

//! CF error series (t, |f_n(t) - e^{-t^2/2}|) up to the interval endpoint.
void
emit_cf_series(const CfProductRecord& record, const std::filesystem::path& path);

//! Writes `content` to `path`, creating parent directories.
void
write_text_file(const std::filesystem::path& path, const std::string& content);

} // namespace llt
