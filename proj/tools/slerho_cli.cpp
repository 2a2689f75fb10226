// slerho: traces, energies, flow-lines, SLE_kappa(rho) sampling and the
// acceptance suite from the command line.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "slerho/acceptance.hpp"
#include "slerho/dirichlet.hpp"
#include "slerho/energy.hpp"
#include "slerho/error.hpp"
#include "slerho/flowline.hpp"
#include "slerho/io.hpp"
#include "slerho/loewner.hpp"
#include "slerho/sampler.hpp"
#include "slerho/zipper.hpp"

using namespace slerho;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Params {
  std::string family = "chordal";
  double rho = 0;
  std::optional<double> x0, v0;
  std::optional<std::string> z0;
  double kappa = 1;
  double T = 1;
  bool to_horizon = false;
  std::size_t steps = 1000;
  std::size_t paths = 1000;
  std::uint64_t seed = 1;
  std::string out;
  std::vector<std::string> formats;
  std::string grid = "uniform";
  std::string setting = "chordal";
  std::string drive_csv, curve_csv;
  std::vector<double> amplitudes, frequencies;
  double slope = 0;
  double dt = 1e-3;
  bool inverted = true;
  bool negative = false;
  double theta = 0;
  double ds = 1e-3;
  double eps = 0;
  std::vector<double> levels;
  double dt_max = 1e-3;
  bool dump_paths = false;
  double beta = 2.0 / 3;
  double r_in = 1;
  std::vector<double> radii{10, 100, 1000, 10000};
  std::vector<int> only;
};

cplx parse_point(const std::string& s) {
  std::stringstream ss(s);
  double re = 0, im = 0;
  char comma = 0;
  if (!(ss >> re >> comma >> im) || comma != ',')
    fail(ErrorCode::InvalidArgument, "expected a point as re,im but got '" + s + "'");
  return {re, im};
}

Setting parse_setting(const std::string& s) {
  if (s == "chordal") return Setting::ChordalHalfPlane;
  if (s == "radial") return Setting::RadialDisk;
  fail(ErrorCode::InvalidArgument, "setting must be chordal or radial");
}

bool wants(const Params& p, const std::string& f) {
  return p.formats.empty() || std::find(p.formats.begin(), p.formats.end(), f) != p.formats.end();
}

fs::path out_dir(const Params& p) {
  if (!p.out.empty()) return p.out;
  if (const char* env = std::getenv("SLERHO_OUT")) return env;
  return ".";
}

ForcePoint force_point(const Params& p) {
  if (p.z0) return ForcePoint::interior(parse_point(*p.z0), p.rho);
  if (p.v0) return ForcePoint::radial(*p.v0, p.rho);
  return ForcePoint::boundary(p.x0.value_or(1.0), p.rho);
}

DrivingFunction driving(const Params& p) {
  const std::string& f = p.family;
  if (f == "chordal") return make_chordal_sle0(p.rho, p.x0.value_or(1.0));
  if (f == "radial") return make_radial_sle0(p.rho, p.v0.value_or(kPi));
  if (f == "spiral") return make_chordal_sle0_spiral(parse_point(p.z0.value_or("0.5,0.8660254037844386")));
  if (f == "ray") return make_ray(p.rho);
  if (f == "zero")
    return DrivingFunction::from_function(
        p.v0 ? Setting::RadialDisk : Setting::ChordalHalfPlane, [](double) { return 0.0; }, kInf,
        [](double) { return 0.0; }, "zero");
  if (f == "sines")
    return make_sine_series(parse_setting(p.setting), p.amplitudes, p.frequencies, p.slope);
  if (f == "csv") {
    require(!p.drive_csv.empty(), "family csv needs --drive-csv");
    std::ifstream in(p.drive_csv);
    if (!in) fail(ErrorCode::Io, "cannot open " + p.drive_csv);
    DrivingSamples s = io::read_driving_csv(in);
    return DrivingFunction::sampled(parse_setting(p.setting), std::move(s.t), std::move(s.value), "csv");
  }
  fail(ErrorCode::InvalidArgument, "unknown driving family '" + f + "'");
}

// Force point implied by a closed-form family; flags win otherwise.
ForcePoint family_force_point(const Params& p) {
  if (p.family == "spiral")
    return ForcePoint::interior(parse_point(p.z0.value_or("0.5,0.8660254037844386")), -4);
  if (p.family == "radial" && !p.v0) return ForcePoint::radial(kPi, p.rho);
  return force_point(p);
}

TraceGrid parse_grid(const std::string& g) {
  if (g == "uniform") return TraceGrid::Uniform;
  if (g == "sqrt") return TraceGrid::SqrtUniform;
  if (g == "sqrt-end") return TraceGrid::SqrtEnd;
  if (g == "geometric-end") return TraceGrid::GeometricEnd;
  fail(ErrorCode::InvalidArgument, "grid must be uniform, sqrt, sqrt-end or geometric-end");
}

json curve_summary(const Curve& c) {
  return {{"points", c.size()},
          {"start", {io::num(c.points.front().real()), io::num(c.points.front().imag())}},
          {"end", {io::num(c.points.back().real()), io::num(c.points.back().imag())}},
          {"diameter", io::num(c.diameter())},
          {"length", io::num(c.length())}};
}

void emit_curve(const Params& p, const std::string& stem, const std::vector<Curve>& curves,
                const std::vector<io::Marker>& markers, json& summary) {
  const fs::path dir = out_dir(p);
  json files = json::array();
  if (wants(p, "csv")) {
    std::ostringstream os;
    io::write_curve_csv(os, curves.front());
    io::write_file(dir / (stem + ".csv"), os.str());
    files.push_back((dir / (stem + ".csv")).string());
  }
  if (wants(p, "svg")) {
    std::ostringstream os;
    io::write_svg(os, curves, markers);
    io::write_file(dir / (stem + ".svg"), os.str());
    files.push_back((dir / (stem + ".svg")).string());
  }
  if (wants(p, "json")) {
    io::write_file(dir / (stem + ".json"), summary.dump(2) + "\n");
    files.push_back((dir / (stem + ".json")).string());
  }
  summary["files"] = files;
}

int cmd_trace(const Params& p) {
  json s = {{"command", "trace"}, {"family", p.family}};
  Curve c;
  std::vector<io::Marker> marks{{0, "0"}};
  if (p.family == "wholeplane") {
    WholePlaneParams w;
    w.rho = p.rho;
    w.inverted = p.inverted;
    w.orientation = p.negative ? Orientation::Negative : Orientation::Positive;
    w.theta = p.theta;
    w.n = p.steps;
    if (p.v0) w.v0 = *p.v0;
    c = trace_wholeplane(w);
    if (p.rho < -2) {
      const CircleFit f = fit_circle(c.points);
      s["circle_fit"] = {{"center", {io::num(f.center.real()), io::num(f.center.imag())}},
                         {"radius", io::num(f.radius)},
                         {"residual_over_radius", io::num(f.max_residual / f.radius)}};
    }
  } else if (!p.curve_csv.empty()) {
    fail(ErrorCode::InvalidArgument, "trace draws a driving function; use energy --curve-csv for curves");
  } else {
    const DrivingFunction d = driving(p);
    const double T = p.to_horizon ? d.horizon() * (1 - 1e-9) : p.T;
    TraceOptions o;
    o.grid = p.to_horizon && p.grid == "uniform" ? TraceGrid::GeometricEnd : parse_grid(p.grid);
    c = trace(d, p.steps, T, o);
    s["T"] = io::num(T);
    const ForcePoint fp = family_force_point(p);
    if (fp.kind != ForcePoint::Kind::BoundaryRadial && p.family != "ray" && p.family != "zero")
      marks.push_back({fp.location, "force"});
    if (fp.kind == ForcePoint::Kind::BoundaryRadial && d.setting() == Setting::RadialDisk)
      marks.push_back({std::polar(1.0, fp.v0), "force"});
  }
  s["curve"] = curve_summary(c);
  emit_curve(p, "trace", {c}, marks, s);
  std::cout << s.dump(2) << "\n";
  return 0;
}

int cmd_energy(const Params& p) {
  EnergyOptions o;
  o.track.dt = p.dt;
  json s = {{"command", "energy"}};
  ForcePoint fp = force_point(p);
  DrivingFunction d = DrivingFunction::from_function(Setting::ChordalHalfPlane, [](double) { return 0.0; });
  double T = p.T;
  if (!p.curve_csv.empty()) {
    std::ifstream in(p.curve_csv);
    if (!in) fail(ErrorCode::Io, "cannot open " + p.curve_csv);
    const Setting st = parse_setting(p.setting);
    const Curve c = io::read_curve_csv(in, st == Setting::RadialDisk ? Domain::Disk : Domain::HalfPlane);
    const ZipperResult z = extract_driving(c, st);
    d = z.drive;
    T = z.capacity_times.back();
    s["zipper"] = {{"final_time", io::num(T)}, {"residual", io::num(z.residual)}};
  } else {
    d = driving(p);
    if (!p.x0 && !p.v0 && !p.z0) fp = family_force_point(p);
    if (p.to_horizon) T = d.horizon();
  }
  if (fp.setting() != d.setting())
    fail(ErrorCode::InvalidArgument, "force point and driving function are in different settings");
  const EnergyReport r = rho_energy_integrated(d, fp, T, o);
  s["report"] = io::to_json(r);
  if (wants(p, "json")) io::write_file(out_dir(p) / "energy.json", s["report"].dump(2) + "\n");
  std::cout << s.dump(2) << "\n";
  return 0;
}

int cmd_flowline(const Params& p) {
  json s = {{"command", "flowline"}, {"rho", p.rho}};
  FlowlineOptions o;
  o.ds = p.ds;
  Curve tr;
  Flowline fl;
  std::vector<io::Marker> marks{{0, "0"}};
  if (p.z0) {
    const cplx z0 = parse_point(*p.z0);
    require(p.rho == -4, "interior flow-lines are compared with the rho = -4 spiral");
    const DrivingFunction d = make_chordal_sle0_spiral(z0);
    tr = trace(d, p.steps, d.horizon() * (1 - 1e-6), {TraceGrid::GeometricEnd});
    fl = integrate_flowline(FlowField::interior(p.rho, z0), cplx(0, 1e-4 * std::abs(z0)), o);
    marks.push_back({z0, "z0"});
  } else {
    const double x0 = p.x0.value_or(1.0);
    const DrivingFunction d = make_chordal_sle0(p.rho, x0);
    const double T = std::min(p.T, d.horizon() * (1 - 1e-9));
    tr = trace(d, p.steps, T, {d.horizon() < kInf ? TraceGrid::GeometricEnd : TraceGrid::SqrtUniform});
    o.max_length = 3 * tr.length();
    fl = integrate_flowline(FlowField::boundary(p.rho, x0), boundary_flowline_start(x0), o);
    marks.push_back({x0, "x0"});
  }
  const Curve cut = truncate_near(fl.curve, tr.points.back());
  const double dist = curve_distance(tr, cut);
  s["stop"] = to_string(fl.stop);
  s["flowline"] = curve_summary(cut);
  s["hausdorff_to_trace"] = io::num(dist);
  s["relative_to_diameter"] = io::num(dist / tr.diameter());
  emit_curve(p, "flowline", {cut, tr}, marks, s);
  std::cout << s.dump(2) << "\n";
  return 0;
}

int cmd_sample(const Params& p) {
  SimulationConfig c;
  c.kappa = p.kappa;
  c.fp = p.z0 || p.x0 ? force_point(p) : ForcePoint::radial(p.v0.value_or(kPi), p.rho);
  c.T = p.T;
  c.n_paths = p.paths;
  c.seed = p.seed;
  c.eps_stop = p.eps;
  c.dt_max = p.dt_max;
  json s = {{"command", "sample"}, {"kappa", p.kappa}, {"rho", p.rho}, {"seed", p.seed}, {"T", p.T}};
  if (!p.levels.empty()) {
    const double q = dual_proposal_rho(p.kappa, p.rho);
    const auto est = hitting_probabilities(c, p.levels, q);
    json lv = json::array();
    std::vector<double> e, pr;
    for (const auto& x : est) {
      lv.push_back(io::to_json(x));
      e.push_back(x.eps);
      pr.push_back(x.p);
    }
    s["proposal_rho"] = io::num(q);
    s["levels"] = lv;
    if (est.size() >= 2 && std::all_of(pr.begin(), pr.end(), [](double v) { return v > 0; })) {
      s["loglog_slope"] = io::num(loglog_slope(e, pr));
      s["exponent"] = io::num(hitting_exponent(p.kappa, p.rho));
    }
  } else {
    const Simulation sim = simulate_drive(c);
    s["stats"] = io::to_json(sim.stats);
    if (p.dump_paths) {
      std::ostringstream os;
      io::write_paths_csv(os, sim.stats);
      io::write_file(out_dir(p) / "paths.csv", os.str());
    }
  }
  if (wants(p, "json")) io::write_file(out_dir(p) / "sample.json", s.dump(2) + "\n");
  std::cout << s.dump(2) << "\n";
  return 0;
}

int cmd_dirichlet(const Params& p) {
  ConformalMapSample m = two_sector_map(p.beta);
  m.gradient = nullptr;
  const RenormalizedStudy st = renormalized_dirichlet(m, p.beta, p.r_in, p.radii);
  json s = {{"command", "dirichlet"}, {"study", io::to_json(st)}};
  json checks = json::array();
  for (const auto& c : theorem_identity_trivial_checks(p.rho)) checks.push_back(io::to_json(c));
  s["identity_checks"] = checks;
  if (wants(p, "csv")) {
    std::ostringstream os;
    io::write_study_csv(os, st);
    io::write_file(out_dir(p) / "dirichlet.csv", os.str());
  }
  if (wants(p, "json")) io::write_file(out_dir(p) / "dirichlet.json", s.dump(2) + "\n");
  std::cout << s.dump(2) << "\n";
  return 0;
}

int cmd_verify(const Params& p) {
  AcceptanceOptions o;
  o.seed = p.seed;
  o.mc_paths = p.paths;
  o.only = p.only;
  const fs::path dir = out_dir(p);
  std::vector<CriterionResult> results;
  const bool determinism = o.only.empty() || std::find(o.only.begin(), o.only.end(), kCriteria) != o.only.end();
  if (determinism) {
    o.scratch = dir / "determinism";
    results = run_acceptance(o);
  } else {
    results = run_verify(o, dir / "artifacts");
  }
  bool all = true;
  std::ostringstream text;
  for (const auto& r : results) {
    std::cout << format_line(r) << "\n";
    text << format_line(r) << "\n";
    all = all && r.pass;
  }
  io::write_file(dir / "verify.txt", text.str());
  if (determinism) {
    // the first run's artifacts are the reported ones
    std::error_code ec;
    fs::remove_all(dir / "artifacts", ec);
    fs::rename(dir / "determinism" / "run1", dir / "artifacts", ec);
  }
  std::cout << (all ? "all criteria passed" : "some criteria failed") << "\n";
  return all ? 0 : 1;
}

// Reads key=value lines and returns them as --key value arguments.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file " + path);
  std::vector<std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::InvalidArgument, "config line " + std::to_string(lineno) + " is not key=value");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    out.push_back("--" + key);
    if (value != "true") out.push_back(value);
  }
  return out;
}

int error_exit(const std::string& code, const std::string& message, int status) {
  std::cout << json{{"error", code}, {"message", message}}.dump() << "\n";
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    // the config file is applied after the command line, so its values win
    for (std::size_t i = 0; i + 1 < args.size(); ++i)
      if (args[i] == "--config") {
        const auto extra = config_args(args[i + 1]);
        args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
        args.insert(args.end(), extra.begin(), extra.end());
        break;
      }
  } catch (const Error& e) {
    return error_exit(std::string(to_string(e.code())), e.what(), 2);
  }

  Params p;
  CLI::App app{"Loewner energy with a force point: SLE_0(rho) curves, energies, flow-lines, sampling"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");
  app.add_option("--config", "key=value file applied after the command line")->expected(1);

  auto common = [&](CLI::App* s) {
    s->add_option("--rho", p.rho, "force-point weight");
    s->add_option("--x0", p.x0, "boundary force point (chordal)");
    s->add_option("--z0", p.z0, "interior force point as re,im");
    s->add_option("--v0", p.v0, "radial force-point angle in (0, 2 pi)");
    s->add_option("--T", p.T, "final time");
    s->add_option("--out", p.out, "output directory (default $SLERHO_OUT or .)");
    s->add_option("--format", p.formats, "artifact formats to write: csv, svg, json")
        ->delimiter(',')
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll)
        ->check(CLI::IsMember({"csv", "svg", "json"}));
  };
  auto drive_opts = [&](CLI::App* s) {
    s->add_option("--family", p.family, "chordal, radial, spiral, ray, zero, sines, csv, wholeplane");
    s->add_option("--setting", p.setting, "chordal or radial (sines, csv and curve input)");
    s->add_option("--drive-csv", p.drive_csv, "t,value samples for family csv");
    s->add_option("--amplitudes", p.amplitudes, "sine amplitudes")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    s->add_option("--frequencies", p.frequencies, "sine frequencies")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    s->add_option("--slope", p.slope, "linear drift of family sines");
    s->add_flag("--to-horizon", p.to_horizon, "run to the driving horizon");
  };

  CLI::App* tr = app.add_subcommand("trace", "write a curve as CSV and SVG");
  common(tr);
  drive_opts(tr);
  tr->add_option("--steps", p.steps, "number of steps / vertices");
  tr->add_option("--grid", p.grid, "uniform, sqrt, sqrt-end, geometric-end");
  tr->add_flag("!--standard", p.inverted, "whole-plane: start at infinity instead of 0");
  tr->add_flag("--negative", p.negative, "whole-plane: negative orientation");
  tr->add_option("--theta", p.theta, "whole-plane start direction");

  CLI::App* en = app.add_subcommand("energy", "rho-Loewner energy report (JSON)");
  common(en);
  drive_opts(en);
  en->add_option("--curve-csv", p.curve_csv, "curve (re,im rows) to unzip instead of a driving family");
  en->add_option("--dt", p.dt, "base time step");

  CLI::App* fl = app.add_subcommand("flowline", "flow-line against the Loewner trace");
  common(fl);
  fl->add_option("--steps", p.steps, "trace steps");
  fl->add_option("--ds", p.ds, "flow-line arc-length step");

  CLI::App* sa = app.add_subcommand("sample", "SLE_kappa(rho) driving paths");
  common(sa);
  sa->add_option("--kappa", p.kappa, "diffusivity");
  sa->add_option("--paths", p.paths, "number of paths");
  sa->add_option("--seed", p.seed, "random seed");
  sa->add_option("--eps", p.eps, "stop paths once the gap drops below eps");
  sa->add_option("--levels", p.levels, "importance-sampled hitting levels")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  sa->add_option("--dt-max", p.dt_max, "largest Euler step");
  sa->add_flag("--dump-paths", p.dump_paths, "write paths.csv");

  CLI::App* di = app.add_subcommand("dirichlet", "renormalized Dirichlet energy of the corner map");
  common(di);
  di->add_option("--beta", p.beta, "corner parameter in (0, 1)");
  di->add_option("--r-in", p.r_in, "inner radius");
  di->add_option("--radii", p.radii, "outer radii")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  CLI::App* ve = app.add_subcommand("verify", "run the acceptance suite");
  ve->add_option("--seed", p.seed, "base seed")->default_val(20240531);
  ve->add_option("--paths", p.paths, "Monte Carlo paths")->default_val(100000);
  ve->add_option("--out", p.out, "output directory (default $SLERHO_OUT or .)");
  ve->add_option("--only", p.only, "criteria to run")->delimiter(',')->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return error_exit("InvalidArgument", e.what(), 2);
  }

  try {
    if (*tr) return cmd_trace(p);
    if (*en) return cmd_energy(p);
    if (*fl) return cmd_flowline(p);
    if (*sa) return cmd_sample(p);
    if (*di) return cmd_dirichlet(p);
    if (*ve) return cmd_verify(p);
  } catch (const Error& e) {
    return error_exit(std::string(to_string(e.code())), e.what(), 2);
  } catch (const std::exception& e) {
    return error_exit("Internal", e.what(), 3);
  }
  return 0;
}
