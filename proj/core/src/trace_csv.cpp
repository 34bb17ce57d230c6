#include "dmabo/trace_csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "dmabo/error.hpp"
#include "dmabo/metrics.hpp"

namespace dmabo {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace, const ProblemInstance& problem,
                     double f_star) {
  const int m = trace.num_constraints;
  const int l = trace.num_affine;
  out << "method,t";
  for (std::size_t i = 0; i < problem.agents.size(); ++i) {
    const std::size_t dim = problem.agents[i].dimension();
    if (dim == 1) {
      out << ",x" << i;
    } else {
      for (std::size_t d = 0; d < dim; ++d) out << ",x" << i << '_' << d;
    }
  }
  out << ",f_true";
  for (int j = 0; j < m; ++j) out << ",g_true" << j;
  for (int j = 0; j < m; ++j) out << ",lambda" << j;
  for (int k = 0; k < l; ++k) out << ",mu" << k;
  out << ",R_t,V_t,Vplus_t,S_t\n";

  const auto regret = regret_trace(trace, f_star);
  const auto violation = violation_trace(trace);
  const auto strong = strong_violation_trace(trace);
  const auto shift = shift_trace(trace, problem);
  for (std::size_t t = 0; t < trace.rounds.size(); ++t) {
    const RoundRecord& r = trace.rounds[t];
    out << trace.method << ',' << t + 1;
    for (const Point& x : r.points) {
      for (Eigen::Index d = 0; d < x.size(); ++d) out << ',' << format_double(x[d]);
    }
    out << ',' << format_double(r.total_f());
    const Eigen::VectorXd g = r.total_g();
    for (int j = 0; j < m; ++j) out << ',' << format_double(g[j]);
    for (int j = 0; j < m; ++j) {
      out << ',';
      if (r.dual) out << format_double(r.dual->lambda[j]);
    }
    for (int k = 0; k < l; ++k) {
      out << ',';
      if (r.dual) out << format_double(r.dual->mu[k]);
    }
    out << ',' << format_double(regret[t]) << ',' << format_double(violation[t]) << ','
        << format_double(strong[t]) << ',' << format_double(shift[t]) << '\n';
  }
}

void write_trace_csv(const std::filesystem::path& path, const RunTrace& trace,
                     const ProblemInstance& problem, double f_star) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path.string());
  write_trace_csv(out, trace, problem, f_star);
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

}  // namespace

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  throw InputError("missing CSV column " + name);
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

std::vector<std::string> CsvTable::column(const std::string& name) const {
  const std::size_t c = column_index(name);
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& row : rows) out.push_back(row[c]);
  return out;
}

std::vector<double> CsvTable::numeric_column(const std::string& name) const {
  std::vector<double> out;
  for (const auto& cell : column(name)) {
    try {
      out.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw InputError("non-numeric value '" + cell + "' in column " + name);
    }
  }
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) return table;
  table.header = split_row(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto row = split_row(line);
    if (row.size() != table.header.size()) {
      throw InputError(path.string() + ": row width does not match the header");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace dmabo
