#include "vsap/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace vsap::io {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(line);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& text) {
  // strtod accepts subnormals; stod rejects them as out of range.
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw std::runtime_error("malformed number '" + text + "'");
  }
  return v;
}

std::string meta_line(const std::map<std::string, std::string>& meta) {
  std::string line = "#";
  for (const auto& [k, v] : meta) line += " " + k + "=" + v;
  return line;
}

std::map<std::string, std::string> grid_meta(const PhaseGrid& grid, double t) {
  return {{"n_x", std::to_string(grid.n_x)},
          {"x_lo", format_double(grid.x_lo)},
          {"x_hi", format_double(grid.x_hi)},
          {"dx", format_double(grid.dx)},
          {"t", format_double(t)}};
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_diagnostics_csv(const std::filesystem::path& path, const DiagnosticsSeries& series) {
  auto out = open_out(path);
  out << kDiagnosticsHeader << '\n';
  for (const auto& r : series) {
    for (double v : {r.t, r.mass, r.momentum, r.max_grad_u, r.max_grad_rho_over_rho, r.max_grad_P_over_rho,
                     r.G, r.R, r.omega_max, r.omega_bound, r.first_xi_moment_max, r.boundary_mass_fraction}) {
      out << format_double(v) << ',';
    }
    out << r.cg_iters << '\n';
  }
}

DiagnosticsSeries read_diagnostics_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line != kDiagnosticsHeader) {
    throw std::runtime_error("'" + path.string() + "' is not a diagnostics file");
  }
  DiagnosticsSeries series;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) throw std::runtime_error("diagnostics row has " + std::to_string(f.size()) + " fields");
    DiagnosticsRecord r;
    double* slots[] = {&r.t, &r.mass, &r.momentum, &r.max_grad_u, &r.max_grad_rho_over_rho,
                       &r.max_grad_P_over_rho, &r.G, &r.R, &r.omega_max, &r.omega_bound,
                       &r.first_xi_moment_max, &r.boundary_mass_fraction};
    for (int k = 0; k < 12; ++k) *slots[k] = parse_double(f[k]);
    r.cg_iters = static_cast<int>(parse_double(f[12]));
    series.push_back(r);
  }
  return series;
}

std::string Snapshot::kind() const {
  const auto it = meta.find("kind");
  return it == meta.end() ? "" : it->second;
}

double Snapshot::meta_number(const std::string& key) const {
  const auto it = meta.find(key);
  if (it == meta.end()) throw std::invalid_argument("snapshot lacks metadata '" + key + "'");
  return parse_double(it->second);
}

Eigen::ArrayXd Snapshot::column(const std::string& name) const {
  for (std::size_t k = 0; k < columns.size(); ++k) {
    if (columns[k] == name) return data.col(static_cast<Eigen::Index>(k));
  }
  throw std::invalid_argument("snapshot has no column '" + name + "'");
}

void write_macro_snapshot(const std::filesystem::path& path, const PhaseGrid& grid, double t,
                          const std::vector<std::pair<std::string, ScalarField>>& columns,
                          const std::map<std::string, std::string>& extra_meta) {
  auto meta = grid_meta(grid, t);
  meta.insert(extra_meta.begin(), extra_meta.end());
  meta["kind"] = "macro";
  std::string names = "x";
  for (const auto& c : columns) names += "," + c.first;
  meta["columns"] = names;

  auto out = open_out(path);
  out << meta_line(meta) << '\n';
  for (int i = 0; i < grid.n_x; ++i) {
    out << format_double(grid.x_centers[i]);
    for (const auto& c : columns) out << ',' << format_double(c.second[i]);
    out << '\n';
  }
}

void write_phase_snapshot(const std::filesystem::path& path, const PhaseGrid& grid, double t,
                          const PhaseField& field, const std::string& variable,
                          const std::map<std::string, std::string>& extra_meta) {
  auto meta = grid_meta(grid, t);
  meta.insert(extra_meta.begin(), extra_meta.end());
  meta["kind"] = "phase";
  meta["var"] = variable;
  meta["n_v"] = std::to_string(grid.n_xi);
  meta["v_max"] = format_double(grid.xi_max());
  meta["dv"] = format_double(grid.dxi);

  auto out = open_out(path);
  out << meta_line(meta) << '\n';
  for (int i = 0; i < grid.n_x; ++i) {
    for (int j = 0; j < grid.n_xi; ++j) {
      if (j) out << ',';
      out << format_double(field(i, j));
    }
    out << '\n';
  }
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line) || line.rfind("# ", 0) != 0) {
    throw std::runtime_error("'" + path.string() + "' lacks a snapshot header");
  }
  Snapshot snap;
  for (const auto& token : split(line.substr(2), ' ')) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) continue;
    snap.meta[token.substr(0, eq)] = token.substr(eq + 1);
  }
  if (snap.kind() == "macro") snap.columns = split(snap.meta.at("columns"), ',');

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    for (const auto& f : split(line, ',')) row.push_back(parse_double(f));
    if (!rows.empty() && row.size() != rows.front().size()) throw std::runtime_error("ragged snapshot rows");
    rows.push_back(std::move(row));
  }
  const Eigen::Index cols = rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size());
  snap.data.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j) snap.data(static_cast<Eigen::Index>(i), j) = rows[i][j];
  return snap;
}

double compare_snapshots(const Snapshot& a, const Snapshot& b, Norm norm, const std::string& field) {
  if (a.kind() != b.kind()) throw std::invalid_argument("snapshots are of different kinds");
  if (a.data.rows() != b.data.rows() || a.meta_number("dx") != b.meta_number("dx")) {
    throw std::invalid_argument("snapshots are on different x-grids");
  }
  const double dx = a.meta_number("dx");
  if (a.kind() == "phase") {
    if (a.data.cols() != b.data.cols() || a.meta_number("dv") != b.meta_number("dv")) {
      throw std::invalid_argument("snapshots are on different velocity grids");
    }
    const Eigen::ArrayXXd diff = (a.data - b.data).abs();
    return norm == Norm::L1 ? diff.sum() * dx * a.meta_number("dv") : diff.maxCoeff();
  }
  return compare_fields(a.column(field), b.column(field), norm, dx);
}

double snapshot_norm(const Snapshot& s, Norm norm, const std::string& field) {
  const double dx = s.meta_number("dx");
  if (s.kind() == "phase") {
    return norm == Norm::L1 ? s.data.abs().sum() * dx * s.meta_number("dv") : s.data.abs().maxCoeff();
  }
  const Eigen::ArrayXd col = s.column(field);
  return compare_fields(col, Eigen::ArrayXd::Zero(col.size()), norm, dx);
}

}  // namespace vsap::io
