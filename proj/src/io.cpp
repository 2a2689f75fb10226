#include "slerho/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slerho/error.hpp"

namespace slerho::io {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

json num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return std::stod(fmt(x));
}

namespace {

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

bool parse_number(const std::string& s, double& v) {
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) return false;
  while (*end == ' ' || *end == '\r' || *end == '\t') ++end;
  return *end == '\0';
}

// Numeric rows of a CSV stream; a leading non-numeric row is a header.
std::vector<std::vector<double>> numeric_rows(std::istream& is, std::size_t& width) {
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  width = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto cells = split_row(line);
    std::vector<double> row(cells.size());
    bool ok = true;
    for (std::size_t k = 0; k < cells.size(); ++k) ok = ok && parse_number(cells[k], row[k]);
    if (!ok) {
      if (rows.empty() && width == 0) {
        width = cells.size();
        continue;
      }
      fail(ErrorCode::Io, "non-numeric value on line " + std::to_string(lineno));
    }
    if (width == 0) width = row.size();
    if (row.size() != width)
      fail(ErrorCode::Io, "expected " + std::to_string(width) + " columns on line " +
                              std::to_string(lineno));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

void write_driving_csv(std::ostream& os, const DrivingSamples& s) {
  os << "t,value\n";
  for (std::size_t k = 0; k < s.t.size(); ++k) os << fmt(s.t[k]) << ',' << fmt(s.value[k]) << '\n';
}

DrivingSamples read_driving_csv(std::istream& is) {
  std::size_t width = 0;
  const auto rows = numeric_rows(is, width);
  if (width != 2) fail(ErrorCode::Io, "driving CSV needs two columns t,value");
  DrivingSamples s;
  for (const auto& r : rows) {
    s.t.push_back(r[0]);
    s.value.push_back(r[1]);
  }
  return s;
}

void write_curve_csv(std::ostream& os, const Curve& c) {
  os << "t,re,im\n";
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double t = c.params.empty() ? static_cast<double>(k) : c.params[k];
    os << fmt(t) << ',' << fmt(c.points[k].real()) << ',' << fmt(c.points[k].imag()) << '\n';
  }
}

Curve read_curve_csv(std::istream& is, Domain domain) {
  std::size_t width = 0;
  const auto rows = numeric_rows(is, width);
  if (width != 2 && width != 3) fail(ErrorCode::Io, "curve CSV needs re,im or t,re,im columns");
  Curve c;
  c.domain = domain;
  for (const auto& r : rows) {
    c.points.emplace_back(r[width - 2], r[width - 1]);
    if (width == 3) c.params.push_back(r[0]);
  }
  if (c.size() < 2) fail(ErrorCode::Io, "curve CSV needs at least two points");
  return c;
}

void write_track_csv(std::ostream& os, const LoewnerTrack& tr) {
  const bool radial = tr.setting == Setting::RadialDisk;
  const bool interior = tr.fp.kind == ForcePoint::Kind::InteriorChordal;
  os << "t,driving,force_re,force_im,gap,log_deriv";
  if (radial) os << ",v";
  if (interior) os << ",theta,sin_theta";
  os << '\n';
  for (std::size_t k = 0; k < tr.size(); ++k) {
    os << fmt(tr.times[k]) << ',' << fmt(tr.driving[k]) << ',' << fmt(tr.force_image[k].real())
       << ',' << fmt(tr.force_image[k].imag()) << ',' << fmt(tr.gap(k)) << ','
       << fmt(tr.log_deriv[k]);
    if (radial) os << ',' << fmt(tr.force_angle[k]);
    if (interior) os << ',' << fmt(tr.theta[k]) << ',' << fmt(std::sin(tr.theta[k]));
    os << '\n';
  }
}

void write_study_csv(std::ostream& os, const RenormalizedStudy& st) {
  os << "R,log_R,dirichlet,renormalized\n";
  for (std::size_t k = 0; k < st.radii.size(); ++k)
    os << fmt(st.radii[k]) << ',' << fmt(std::log(st.radii[k])) << ',' << fmt(st.dirichlet[k])
       << ',' << fmt(st.renormalized[k]) << '\n';
}

void write_paths_csv(std::ostream& os, const PathStats& stats) {
  os << "path,final_time,final_value,min_gap,hit,hit_time,steps,stop\n";
  for (std::size_t k = 0; k < stats.paths.size(); ++k) {
    const PathRecord& r = stats.paths[k];
    os << k << ',' << fmt(r.final_time) << ',' << fmt(r.final_value) << ',' << fmt(r.min_gap)
       << ',' << r.hit << ',' << fmt(r.hit_time) << ',' << r.steps << ',' << to_string(r.stop)
       << '\n';
  }
}

void write_svg(std::ostream& os, const std::vector<Curve>& curves,
               const std::vector<Marker>& markers, int size) {
  double x0 = kInf, x1 = -kInf, y0 = kInf, y1 = -kInf;
  auto grow = [&](cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return;
    x0 = std::min(x0, z.real());
    x1 = std::max(x1, z.real());
    y0 = std::min(y0, z.imag());
    y1 = std::max(y1, z.imag());
  };
  bool disk = false;
  for (const Curve& c : curves) {
    for (cplx z : c.points) grow(z);
    disk = disk || c.domain == Domain::Disk;
  }
  for (const Marker& m : markers) grow(m.at);
  if (disk) {
    grow({-1, -1});
    grow({1, 1});
  }
  if (!(x1 >= x0)) x0 = -1, x1 = 1, y0 = -1, y1 = 1;
  const double span = std::max({x1 - x0, y1 - y0, 1e-12});
  const double cx = (x0 + x1) / 2, cy = (y0 + y1) / 2;
  const double inner = 0.9 * size, margin = 0.05 * size;
  auto X = [&](double x) { return margin + (x - cx + span / 2) / span * inner; };
  auto Y = [&](double y) { return margin + (cy + span / 2 - y) / span * inner; };

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size
     << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (disk) {
    os << "<circle cx=\"" << fmt(X(0)) << "\" cy=\"" << fmt(Y(0)) << "\" r=\""
       << fmt(inner / span) << "\" fill=\"none\" stroke=\"#999\"/>\n";
  } else if (y0 <= 0 && y1 >= -1e-12 * span) {
    os << "<line x1=\"" << fmt(margin) << "\" y1=\"" << fmt(Y(0)) << "\" x2=\""
       << fmt(margin + inner) << "\" y2=\"" << fmt(Y(0)) << "\" stroke=\"#999\"/>\n";
  }
  static const char* colors[] = {"#1f4e9c", "#c0392b", "#27864a", "#8e44ad"};
  for (std::size_t i = 0; i < curves.size(); ++i) {
    os << "<polyline fill=\"none\" stroke=\"" << colors[i % 4] << "\" stroke-width=\"1.5\" points=\"";
    for (cplx z : curves[i].points) {
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) continue;
      os << fmt(X(z.real())) << ',' << fmt(Y(z.imag())) << ' ';
    }
    os << "\"/>\n";
  }
  for (const Marker& m : markers) {
    os << "<circle cx=\"" << fmt(X(m.at.real())) << "\" cy=\"" << fmt(Y(m.at.imag()))
       << "\" r=\"4\" fill=\"black\"/>\n";
    os << "<text x=\"" << fmt(X(m.at.real()) + 6) << "\" y=\"" << fmt(Y(m.at.imag()) - 6)
       << "\" font-size=\"14\" font-family=\"sans-serif\">" << m.label << "</text>\n";
  }
  os << "</svg>\n";
}

json to_json(const Certificate& c) {
  json j = {{"name", c.name},       {"applicable", c.applicable}, {"ok", c.ok},
            {"lower", num(c.lower)}, {"value", num(c.value)},      {"upper", num(c.upper)},
            {"margin", num(c.margin)}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

json to_json(const EnergyReport& r) {
  json certs = json::array();
  for (const auto& c : r.certificates) certs.push_back(to_json(c));
  return {{"direct", num(r.direct)},
          {"integrated", num(r.integrated)},
          {"discrepancy", num(r.discrepancy)},
          {"infinite", r.infinite},
          {"final_time", num(r.final_time)},
          {"steps", r.steps},
          {"terms",
           {{"base_energy", num(r.base_energy)},
            {"log_sin_term", num(r.log_sin_term)},
            {"log_deriv_term", num(r.log_deriv_term)},
            {"log_gap_term", num(r.log_gap_term)}}},
          {"certificates", certs}};
}

json to_json(const CoordinateChange& c) {
  return {{"lhs", num(c.lhs)},
          {"rhs", num(c.rhs)},
          {"discrepancy", num(c.discrepancy)},
          {"residual_lhs", num(c.residual_lhs)},
          {"residual_rhs", num(c.residual_rhs)}};
}

json to_json(const Proportion& p) {
  return {{"hits", p.hits}, {"n", p.n}, {"p", num(p.p)}, {"lo", num(p.lo)}, {"hi", num(p.hi)}};
}

json to_json(const PathStats& s) {
  std::size_t steps = 0, reached = 0, blowups = 0, capped = 0;
  for (const auto& r : s.paths) {
    steps += r.steps;
    reached += r.stop == PathStop::ReachedT;
    blowups += r.stop == PathStop::NumericalBlowup;
    capped += r.stop == PathStop::MaxSteps;
  }
  return {{"paths", s.paths.size()},
          {"hit", to_json(s.hit)},
          {"mean_final", num(s.mean_final)},
          {"var_final", num(s.var_final)},
          {"total_steps", steps},
          {"reached_T", reached},
          {"numerical_blowup", blowups},
          {"max_steps", capped}};
}

json to_json(const LevelEstimate& e) {
  return {{"eps", num(e.eps)}, {"p", num(e.p)},   {"se", num(e.se)},
          {"lo", num(e.lo)},   {"hi", num(e.hi)}, {"hits", e.hits}};
}

json to_json(const RenormalizedStudy& st) {
  json rows = json::array();
  for (std::size_t k = 0; k < st.radii.size(); ++k)
    rows.push_back({{"R", num(st.radii[k])},
                    {"dirichlet", num(st.dirichlet[k])},
                    {"renormalized", num(st.renormalized[k])}});
  return {{"beta", num(st.beta)},   {"c_beta", num(st.c_beta)}, {"slope", num(st.slope)},
          {"limit", num(st.limit)}, {"radii", rows}};
}

json to_json(const IdentityCheck& c) {
  return {{"name", c.name}, {"lhs", num(c.lhs)}, {"rhs", num(c.rhs)}, {"ok", c.ok}};
}

json to_json(const Error& e) {
  return {{"error", std::string(to_string(e.code()))}, {"message", e.what()}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  f << text;
  if (!f) fail(ErrorCode::Io, "write failed for " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace slerho::io
