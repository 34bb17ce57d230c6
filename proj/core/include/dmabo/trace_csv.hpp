#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dmabo/problem.hpp"
#include "dmabo/trace.hpp"

namespace dmabo {

/// %.17g, which round-trips every double.
std::string format_double(double v);

/// One row per round: method, t, x per agent (x<i> for scalar decisions,
/// x<i>_<d> otherwise), f_true and g_true<j> summed over agents, lambda<j>,
/// mu<k>, then R_t, V_t, Vplus_t, S_t. Dual columns are blank for methods
/// without duals. Wall time is left out so that reruns are byte-identical.
void write_trace_csv(std::ostream& out, const RunTrace& trace, const ProblemInstance& problem,
                     double f_star);
void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace,
                     const ProblemInstance& problem, double f_star);

/// Plain comma-separated table with a header row (no quoting).
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a column; throws InputError when absent.
  std::size_t column_index(const std::string& name) const;
  bool has_column(const std::string& name) const;
  std::vector<double> numeric_column(const std::string& name) const;
  std::vector<std::string> column(const std::string& name) const;
};

/// Throws InputError when the file cannot be read or rows are ragged.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace dmabo
