#include "slerho/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "slerho/dirichlet.hpp"
#include "slerho/energy.hpp"
#include "slerho/error.hpp"
#include "slerho/flowline.hpp"
#include "slerho/io.hpp"
#include "slerho/loewner.hpp"
#include "slerho/sampler.hpp"
#include "slerho/zipper.hpp"

namespace slerho {

using nlohmann::json;
using io::num;

namespace {

std::string sci(double x, int digits = 3) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

// Smooth driving with a few random sine modes and a drift.
DrivingFunction random_drive(std::mt19937_64& g, Setting s, double amp, double spread) {
  std::uniform_real_distribution<double> U(-1, 1);
  std::vector<double> a, f;
  for (int k = 0; k < 4; ++k) {
    a.push_back(amp * U(g) / (k + 1));
    f.push_back(1 + spread * k + 0.5 * U(g));
  }
  return make_sine_series(s, a, f, 0.3 * U(g), "random-sines");
}

DrivingFunction zero_drive() {
  return DrivingFunction::from_function(
      Setting::ChordalHalfPlane, [](double) { return 0.0; }, kInf, [](double) { return 0.0; },
      "zero");
}

std::string svg(const std::vector<Curve>& curves, const std::vector<io::Marker>& m) {
  std::ostringstream os;
  io::write_svg(os, curves, m);
  return os.str();
}

std::string csv(const Curve& c) {
  std::ostringstream os;
  io::write_curve_csv(os, c);
  return os.str();
}

Curve normalized(const Curve& c) {
  Curve o = c;
  const double d = c.diameter();
  for (cplx& z : o.points) z /= d;
  return o;
}

// ---------------------------------------------------------------------------

void minimizer_zero(CriterionResult& r) {
  r.title = "minimizer-zero";
  r.time_limit = 1;
  double worst = 0;
  json rows = json::array();
  for (double rho : {-1.5, -1.0, 0.0, 1.0, 2.0, 6.0}) {
    const double c = rho_energy_direct(make_chordal_sle0(rho, 1.0), ForcePoint::boundary(1.0, rho), 1.0);
    const double cn = rho_energy_direct(make_chordal_sle0(rho, -1.0), ForcePoint::boundary(-1.0, rho), 1.0);
    const double rad = rho_energy_direct(make_radial_sle0(rho, 2.0), ForcePoint::radial(2.0, rho), 1.0);
    worst = std::max({worst, std::abs(c), std::abs(cn), std::abs(rad)});
    rows.push_back({{"rho", rho}, {"chordal", num(c)}, {"chordal_neg_x0", num(cn)}, {"radial", num(rad)}});
  }
  r.values_ok = worst < 1e-8;
  r.detail = "max |I| = " + sci(worst) + " (< 1e-8) over 18 minimizers";
  r.data = {{"instances", rows}, {"max_abs", num(worst)}};
}

void two_route(CriterionResult& r, std::uint64_t seed) {
  r.title = "two-route energy";
  r.time_limit = 60;
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> U(0, 1);
  const char* names[] = {"boundary-chordal", "interior-chordal", "radial"};
  double worst = 0, worst_ratio = 0;
  json settings = json::array();
  for (int s = 0; s < 3; ++s) {
    double sum[2] = {0, 0}, wrel = 0;
    json rows = json::array();
    for (int i = 0; i < 20; ++i) {
      DrivingFunction d = random_drive(g, s == 2 ? Setting::RadialDisk : Setting::ChordalHalfPlane, 0.3, 1.5);
      ForcePoint fp = s == 0   ? ForcePoint::boundary((U(g) < 0.5 ? -1 : 1) * (1 + U(g)), -1.5 + 5.5 * U(g))
                      : s == 1 ? ForcePoint::interior(cplx(2 * U(g) - 1, 0.7 + U(g)), -8 + 12 * U(g))
                               : ForcePoint::radial(kPi / 2 + kPi * U(g), -1.5 + 5.5 * U(g));
      double err[2], direct = 0, integ = 0;
      for (int j = 0; j < 2; ++j) {
        EnergyOptions o;
        o.track.dt = j ? 5e-5 : 1e-4;
        const EnergyReport rep = rho_energy_integrated(d, fp, 1.0, o);
        err[j] = rep.discrepancy;
        if (j == 0) direct = rep.direct, integ = rep.integrated;
      }
      const double rel = err[0] / std::max(std::abs(direct), 1e-3);
      wrel = std::max(wrel, rel);
      sum[0] += err[0];
      sum[1] += err[1];
      rows.push_back({{"rho", num(fp.rho)}, {"direct", num(direct)}, {"integrated", num(integ)},
                      {"rel_err", num(rel)}, {"err_dt", num(err[0])}, {"err_half_dt", num(err[1])}});
    }
    const double ratio = sum[0] > 0 ? sum[1] / sum[0] : 0;
    worst = std::max(worst, wrel);
    worst_ratio = std::max(worst_ratio, ratio);
    settings.push_back({{"setting", names[s]}, {"max_rel_err", num(wrel)}, {"halving_ratio", num(ratio)}, {"instances", rows}});
  }
  r.values_ok = worst < 1e-3 && worst_ratio <= 0.55;
  r.detail = "max rel err " + sci(worst) + " (< 1e-3), worst aggregate error ratio dt/2 vs dt " +
             sci(worst_ratio) + " (<= 0.55)";
  r.data = {{"settings", settings}};
}

void zero_oracle(CriterionResult& r) {
  r.title = "zero-driving oracle";
  const double oracle = 0.5 * std::log(5.0);
  EnergyOptions o;
  o.track.dt = 1e-4;
  const EnergyReport rep = rho_energy_integrated(zero_drive(), ForcePoint::boundary(1, 2), 1.0, o);
  const double e1 = std::abs(rep.direct - oracle), e2 = std::abs(rep.integrated - oracle);
  r.values_ok = e1 < 1e-4 && e2 < 1e-4;
  r.detail = "direct " + sci(rep.direct, 10) + ", integrated " + sci(rep.integrated, 10) +
             ", ln(5)/2 = " + sci(oracle, 10) + " (errors " + sci(e1) + ", " + sci(e2) + " < 1e-4)";
  r.data = {{"direct", num(rep.direct)}, {"integrated", num(rep.integrated)}, {"oracle", num(oracle)}};
}

void coordinate_change(CriterionResult& r, std::uint64_t seed) {
  r.title = "coordinate change";
  r.time_limit = 120;
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  auto drive = [&](Setting s) {
    std::vector<double> a, f;
    for (int k = 0; k < 3; ++k) {
      a.push_back(0.4 * U(g) / (k + 1));
      f.push_back(1 + 2 * k + 0.5 * U(g));
    }
    return make_sine_series(s, a, f, 0.2 * U(g));
  };
  const std::size_t n = 1000;
  bool ok = true;
  double worst = 0;
  json rows = json::array();
  for (int i = 0; i < 5; ++i) {
    const bool radial = i >= 3;
    const DrivingFunction d = drive(radial ? Setting::RadialDisk : Setting::ChordalHalfPlane);
    const double rho = 1.5 * U(g) + 0.5;
    const double where = radial ? kPi + 0.5 * U(g) : 2.0;
    const Curve c = trace(d, n, 0.5);
    const CoordinateChange cc = radial ? coordinate_change_radial(c, rho, where)
                                       : coordinate_change_chordal(c, rho, where);
    const double tol = std::max(1e-2 * std::abs(cc.lhs), 1e-3);
    ok = ok && cc.discrepancy < tol;
    worst = std::max(worst, cc.discrepancy / tol);
    json row = io::to_json(cc);
    row["setting"] = radial ? "radial" : "chordal";
    row["rho"] = num(rho);
    row[radial ? "v0" : "x0"] = num(where);
    row["tolerance"] = num(tol);
    rows.push_back(row);
  }
  r.values_ok = ok;
  r.detail = "5 curves (3 chordal, 2 radial), n = 1000: worst discrepancy / tolerance " + sci(worst) +
             " (< 1, tolerance max(1e-2 |lhs|, 1e-3))";
  r.data = {{"curves", rows}};
}

void trace_fidelity(CriterionResult& r) {
  r.title = "trace fidelity";
  r.time_limit = 60;
  const Curve z = trace(zero_drive(), 1000, 1.0);
  double zdev = 0;
  for (std::size_t k = 0; k < z.size(); ++k)
    zdev = std::max(zdev, std::abs(z.points[k] - cplx(0, 2 * std::sqrt(z.params[k]))));

  json rays = json::array();
  double worst_angle = 0;
  std::vector<Curve> ray_curves;
  for (double rho : {-1.0, 0.0, 1.0, 2.0, 6.0}) {
    const Curve c = trace(make_ray(rho), 2000, 1.0);
    double dev = 0;
    for (std::size_t k = c.size() / 2; k < c.size(); ++k) dev = std::max(dev, std::abs(std::arg(c.points[k]) - ray_angle(rho)));
    worst_angle = std::max(worst_angle, dev);
    rays.push_back({{"rho", rho}, {"angle", num(ray_angle(rho))}, {"max_deviation", num(dev)}});
    ray_curves.push_back(c);
  }

  json zip = json::array();
  std::vector<double> res;
  const DrivingFunction d = make_chordal_sle0(1, 1);
  for (std::size_t n : {250, 500, 1000}) {
    const ZipperResult zr = extract_driving(trace(d, n, 1.0), Setting::ChordalHalfPlane);
    res.push_back(zr.residual);
    zip.push_back({{"n", n}, {"residual", num(zr.residual)}});
  }
  const bool decreasing = res[1] < res[0] && res[2] < res[1];
  r.values_ok = zdev < 1e-3 && worst_angle < 0.02 && res.back() < 1e-2 && decreasing;
  r.detail = "zero-driving deviation " + sci(zdev) + " (< 1e-3); ray angle deviation " +
             sci(worst_angle) + " (< 0.02 rad); zipper residuals " + sci(res[0]) + ", " +
             sci(res[1]) + ", " + sci(res[2]) + " (< 1e-2, decreasing)";
  r.data = {{"zero_max_deviation", num(zdev)}, {"rays", rays}, {"zipper", zip}};
  r.artifacts.push_back({"c05_zero_trace.csv", csv(z)});
  r.artifacts.push_back({"c05_rays.svg", svg(ray_curves, {{0, "0"}})});
}

void flowline_agreement(CriterionResult& r) {
  r.title = "flow-line agreement";
  r.time_limit = 60;
  bool ok = true;
  json rows = json::array();
  double worst = 0;
  for (double rho : {-1.0, 0.0, 2.0}) {
    const Curve tr = trace(make_chordal_sle0(rho, 1.0), 2000, 1.0, {TraceGrid::SqrtUniform});
    FlowlineOptions o;
    o.ds = 2e-3;
    o.max_length = 3 * tr.length();
    const Flowline fl = integrate_flowline(FlowField::boundary(rho, 1.0), boundary_flowline_start(1.0), o);
    const double d = curve_distance(tr, truncate_near(fl.curve, tr.points.back()));
    const double rel = d / tr.diameter();
    ok = ok && rel < 1e-2;
    worst = std::max(worst, rel);
    rows.push_back({{"field", "boundary"}, {"rho", rho}, {"x0", 1}, {"distance", num(d)}, {"relative", num(rel)}});
  }
  const cplx z0 = std::polar(1.0, kPi / 3);
  const DrivingFunction sp = make_chordal_sle0_spiral(z0);
  const Curve tr = trace(sp, 4000, sp.horizon() * (1 - 1e-6), {TraceGrid::GeometricEnd});
  const Flowline fl = integrate_flowline(FlowField::interior(-4, z0), cplx(0, 1e-4), {});
  const Curve cut = truncate_near(fl.curve, tr.points.back());
  const double d = curve_distance(tr, cut);
  const double rel = d / tr.diameter();
  ok = ok && rel < 1e-2;
  worst = std::max(worst, rel);
  rows.push_back({{"field", "interior"}, {"rho", -4}, {"z0", {num(z0.real()), num(z0.imag())}},
                  {"distance", num(d)}, {"relative", num(rel)}});
  r.values_ok = ok;
  r.detail = "worst Hausdorff / diameter " + sci(worst) + " (< 1e-2) for boundary rho = -1, 0, 2 and the interior spiral";
  r.data = {{"cases", rows}};
  r.artifacts.push_back({"c06_spiral.svg", svg({tr, cut}, {{0, "0"}, {z0, "z0"}})});
}

void wholeplane_geometry(CriterionResult& r) {
  r.title = "whole-plane geometry";
  r.time_limit = 30;
  WholePlaneParams p;
  p.n = 4000;
  p.span = 1000;

  p.rho = -6;
  const Curve circle = trace_wholeplane(p);
  const CircleFit cf = fit_circle(circle.points);
  const double through0 = std::abs(std::abs(cf.center) - cf.radius) / cf.radius;
  const double circ_res = cf.max_residual / cf.radius;

  p.rho = -4;
  const Curve card = trace_wholeplane(p);
  // r = a + b cos(phi) + c sin(phi) about the origin; a cardioid with cusp
  // at 0 has b^2 + c^2 = a^2
  double A[3][3] = {}, B[3] = {};
  for (cplx z : card.points) {
    const double ph = std::arg(z), v[3] = {1, std::cos(ph), std::sin(ph)};
    for (int i = 0; i < 3; ++i) {
      B[i] += v[i] * std::abs(z);
      for (int j = 0; j < 3; ++j) A[i][j] += v[i] * v[j];
    }
  }
  auto det = [](const double M[3][3]) {
    return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
           M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  };
  double x[3];
  for (int k = 0; k < 3; ++k) {
    double M[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M[i][j] = j == k ? B[i] : A[i][j];
    x[k] = det(M) / det(A);
  }
  double card_res = 0;
  for (cplx z : card.points) {
    const double ph = std::arg(z);
    card_res = std::max(card_res, std::abs(std::abs(z) - (x[0] + x[1] * std::cos(ph) + x[2] * std::sin(ph))));
  }
  card_res /= x[0];
  const double cusp_gap = std::abs(std::hypot(x[1], x[2]) / x[0] - 1);
  // both ends reach 0 along the same direction
  const double cusp_angle =
      std::abs(std::remainder(std::arg(card.points.back()) - std::arg(card.points.front()), 2 * kPi));

  p.rho = -3;
  p.cut_loop = false;
  const Curve m3 = trace_wholeplane(p);
  const auto x3 = first_self_intersection(m3.points, 1e-9 * m3.diameter());
  p.rho = -5;
  const Curve m5 = trace_wholeplane(p);
  const auto x5 = first_self_intersection(m5.points, 1e-9 * m5.diameter());
  p.cut_loop = true;
  p.rho = -3;
  const Curve m3cut = trace_wholeplane(p);

  // independent check: the same shapes from the radial Loewner chain
  double loewner = 0;
  json cross = json::array();
  for (double rho : {-6.0, -4.0}) {
    p.rho = rho;
    const double h = hausdorff(normalized(trace_wholeplane(p)),
                               normalized(trace_wholeplane_loewner(rho, Orientation::Positive, 0, 0, 2000)),
                               2e-3);
    loewner = std::max(loewner, h);
    cross.push_back({{"rho", rho}, {"hausdorff_over_diameter", num(h)}});
  }

  const bool ok6 = circ_res < 1e-3 && through0 < 1e-3;
  const bool ok4 = card_res < 1e-3 && cusp_gap < 1e-3 && cusp_angle < 1e-2;
  r.values_ok = ok6 && ok4 && x3.has_value() && !x5.has_value() && loewner < 3e-2;
  r.detail = "circle residual " + sci(circ_res) + " radius (< 1e-3), center-to-origin mismatch " +
             sci(through0) + "; cardioid residual " + sci(card_res) + ", cusp angle " +
             sci(cusp_angle) + " rad; rho=-3 self-intersects: " + (x3 ? "yes" : "no") +
             ", rho=-5: " + (x5 ? "yes" : "no") + "; Loewner cross-check " + sci(loewner) + " diam";
  r.data = {{"circle", {{"center", {num(cf.center.real()), num(cf.center.imag())}},
                        {"radius", num(cf.radius)},
                        {"residual_over_radius", num(circ_res)},
                        {"origin_mismatch", num(through0)}}},
            {"cardioid", {{"a", num(x[0])}, {"b", num(x[1])}, {"c", num(x[2])},
                          {"residual_over_a", num(card_res)}, {"cusp_angle", num(cusp_angle)}}},
            {"rho_minus3_crossing", x3 ? json{num(x3->point.real()), num(x3->point.imag())} : json()},
            {"rho_minus5_crossing", x5.has_value()},
            {"loewner_cross_check", cross}};
  r.artifacts.push_back({"c07_rho-6.csv", csv(circle)});
  r.artifacts.push_back({"c07_wholeplane.svg", svg({circle, card, m3cut, m5}, {{0, "0"}})});
}

void spiral_invariant(CriterionResult& r) {
  r.title = "spiral invariant";
  double sin_dev = 0;
  json sp = json::array();
  std::string track_csv;
  for (cplx z0 : {std::polar(1.0, kPi / 3), std::polar(2.0, 1.0), std::polar(0.5, 2.5)}) {
    const DrivingFunction d = make_chordal_sle0_spiral(z0);
    // track until the gap |W - z| = sqrt(|z0|^2 - 4t) is 1e-4 |z0|
    const double end_gap = 1e-4 * std::abs(z0);
    const double T = d.horizon() - end_gap * end_gap / 4;
    const LoewnerTrack tr = track_force_point(d, ForcePoint::interior(z0, -4), T);
    double dev = 0;
    for (double th : tr.theta) dev = std::max(dev, std::abs(std::sin(th) - std::sin(std::arg(z0))));
    const bool complete = tr.stop == StopReason::ReachedT;
    if (!complete) dev = kInf;
    sin_dev = std::max(sin_dev, dev);
    sp.push_back({{"z0", {num(z0.real()), num(z0.imag())}}, {"T", num(T)}, {"steps", tr.size()},
                  {"final_gap", num(tr.gap(tr.size() - 1))}, {"max_sin_deviation", num(dev)}});
    if (track_csv.empty()) {
      std::ostringstream os;
      io::write_track_csv(os, tr);
      track_csv = os.str();
    }
  }
  double gap_dev = 0;
  json rad = json::array();
  for (double v0 : {0.5, 1.0, kPi, 5.0}) {
    const LoewnerTrack tr = track_force_point(make_radial_sle0(-2, v0), ForcePoint::radial(v0, -2), 5.0);
    double dev = 0;
    for (std::size_t k = 0; k < tr.size(); ++k)
      dev = std::max(dev, std::abs(tr.force_angle[k] - tr.driving[k] - v0));
    gap_dev = std::max(gap_dev, dev);
    rad.push_back({{"v0", num(v0)}, {"T", 5}, {"max_gap_deviation", num(dev)}});
  }
  r.values_ok = sin_dev < 1e-4 && gap_dev < 1e-9;
  r.detail = "max |sin theta_t - sin theta_0| " + sci(sin_dev) +
             " (< 1e-4, tracked to gap 1e-4 |z0|); max |v_t - w_t - v0| " + sci(gap_dev) + " (< 1e-9)";
  r.data = {{"spiral", sp}, {"radial_minus2", rad}};
  r.artifacts.push_back({"c08_spiral_track.csv", track_csv});
}

void bound_certs(CriterionResult& r, std::uint64_t seed) {
  r.title = "bound certificates";
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> U(-1, 1);
  int bad[4] = {0, 0, 0, 0}, checked[4] = {0, 0, 0, 0};
  double slack[4] = {kInf, kInf, kInf, kInf};
  auto tally = [&](int j, const Certificate& c) {
    if (!c.applicable) return;
    ++checked[j];
    bad[j] += !c.ok;
    slack[j] = std::min(slack[j], c.margin);
  };
  for (int i = 0; i < 50; ++i) {
    const DrivingFunction d = random_drive(g, Setting::ChordalHalfPlane, 0.6, 2);
    const double rho = -4.5 - 3.5 * (U(g) + 1) / 2;
    const cplx z0(U(g), 0.8 + 0.5 * (U(g) + 1));
    for (const Certificate& c : bound_certificates(d, ForcePoint::interior(z0, rho), 1.0))
      if (c.name != "final-sin-theta") tally(0, c);

    const DrivingFunction d2 = random_drive(g, Setting::ChordalHalfPlane, 0.6, 2);
    const double rho2 = -1.9 + 7.9 * (U(g) + 1) / 2;
    const double x0 = (U(g) < 0 ? -1 : 1) * (1 + (U(g) + 1) / 2);
    for (const Certificate& c : bound_certificates(d2, ForcePoint::boundary(x0, rho2), 1.0))
      tally(c.name == "welding" ? 2 : 1, c);

    const DrivingFunction d3 = random_drive(g, Setting::RadialDisk, 0.6, 2);
    tally(3, chordal_radial_certificate(trace(d3, 600, 1.0 + 0.5 * U(g))));
  }
  double eq = 0;
  json eqs = json::array();
  for (double rho : {-1.5, 0.0, 1.0, 4.0}) {
    const TrackOptions o = welding_track_options(rho, 1.0);
    const LoewnerTrack tr = track_force_point(make_chordal_sle0(rho, 1.0), ForcePoint::boundary(1.0, rho), 2.0, o);
    const WeldingBound w = welding_lower_bound(tr, rho, 1.0);
    eq = std::max(eq, std::abs(w.bound));
    eqs.push_back({{"rho", rho}, {"bound", num(w.bound)}, {"r_T", num(w.r_T)}, {"r_0", num(w.r_0)}});
  }
  const char* names[] = {"interior rho < -4", "boundary rho > -2", "welding", "chordal-radial"};
  json fam = json::array();
  bool ok = eq < 1e-6;
  std::string counts;
  for (int j = 0; j < 4; ++j) {
    ok = ok && bad[j] == 0 && checked[j] >= 50;
    fam.push_back({{"family", names[j]}, {"checked", checked[j]}, {"violations", bad[j]}, {"min_margin", num(slack[j])}});
    counts += std::string(j ? ", " : "") + names[j] + " " + std::to_string(bad[j]) + "/" + std::to_string(checked[j]);
  }
  r.values_ok = ok;
  r.detail = "violations " + counts + "; welding equality case max |bound| " + sci(eq) + " (< 1e-6)";
  r.data = {{"families", fam}, {"welding_equality", eqs}};
}

void monte_carlo(CriterionResult& r, std::uint64_t seed, std::size_t paths) {
  r.title = "Monte Carlo exponent";
  r.time_limit = 600;
  bool ok = true;
  json rows = json::array();
  std::string slopes;
  for (double kappa : {0.5, 1.0})
    for (double rho : {0.0, 1.0}) {
      SimulationConfig c;
      c.kappa = kappa;
      c.fp = ForcePoint::radial(kPi, rho);
      c.T = 1;
      c.n_paths = paths;
      c.seed = seed++;
      const auto est = hitting_probabilities(c, {0.2, 0.1, 0.05}, dual_proposal_rho(kappa, rho));
      std::vector<double> e, p;
      json lv = json::array();
      bool positive = true;
      for (const LevelEstimate& x : est) {
        e.push_back(x.eps);
        p.push_back(x.p);
        positive = positive && x.p > 0;
        lv.push_back(io::to_json(x));
      }
      const double slope = positive ? loglog_slope(e, p) : -kInf;
      const double need = hitting_exponent(kappa, rho) - 0.5;
      ok = ok && slope >= need;
      slopes += (slopes.empty() ? "" : ", ") + sci(slope) + ">=" + sci(need);
      rows.push_back({{"kappa", kappa}, {"rho", rho}, {"slope", num(slope)}, {"threshold", num(need)}, {"levels", lv}});
    }
  SimulationConfig c;
  c.kappa = 0.5;
  c.fp = ForcePoint::radial(kPi, 1);
  c.T = 1;
  c.n_paths = paths;
  c.seed = seed;
  const DrivingFunction center = make_radial_sle0(1, kPi);
  const DrivingFunction pert = add(center, make_sine_series(Setting::RadialDisk, {0.5}, {kPi}));
  const Proportion a = tube_probability(c, center, 0.3);
  const Proportion b = tube_probability(c, pert, 0.3);
  const bool ordered = a.lo > b.hi;
  r.values_ok = ok && ordered;
  r.detail = "slopes " + slopes + "; tube p(minimizer) = " + sci(a.p) + " [" + sci(a.lo) + ", " +
             sci(a.hi) + "] vs p(perturbed) = " + sci(b.p) + " [" + sci(b.lo) + ", " + sci(b.hi) + "]";
  r.data = {{"paths", paths}, {"exponents", rows},
            {"tube", {{"radius", 0.3}, {"minimizer", io::to_json(a)}, {"perturbed", io::to_json(b)}}}};
}

void corner(CriterionResult& r) {
  r.title = "corner renormalization";
  r.time_limit = 60;
  bool ok = true;
  double worst = 0;
  json rows = json::array();
  for (double beta : {1.0 / 3, 0.4, 2.0 / 3}) {
    // finite-difference gradients, not the closed form
    ConformalMapSample m = two_sector_map(beta);
    m.gradient = nullptr;
    const RenormalizedStudy st = renormalized_dirichlet(m, beta, 1.0, {10, 100, 1000, 10000});
    const double rel = std::abs(st.slope / st.c_beta - 1);
    ok = ok && rel < 1e-2;
    worst = std::max(worst, rel);
    rows.push_back(io::to_json(st));
    std::ostringstream os;
    io::write_study_csv(os, st);
    char name[48];
    std::snprintf(name, sizeof name, "c11_beta_%.4f.csv", beta);
    r.artifacts.push_back({name, os.str()});
  }
  r.values_ok = ok;
  r.detail = "worst |slope / c_beta - 1| = " + sci(worst) + " (< 1e-2) for beta = 1/3, 2/5, 2/3";
  r.data = {{"studies", rows}};
}

using Clock = std::chrono::steady_clock;

void finish(CriterionResult& r, Clock::time_point t0) {
  r.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  r.pass = r.values_ok && (r.time_limit <= 0 || r.seconds <= r.time_limit);
}

bool selected(const AcceptanceOptions& o, int id) {
  return o.only.empty() || std::find(o.only.begin(), o.only.end(), id) != o.only.end();
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opts) {
  CriterionResult r;
  r.id = id;
  const auto t0 = Clock::now();
  try {
    switch (id) {
      case 1: minimizer_zero(r); break;
      case 2: two_route(r, opts.seed + 2); break;
      case 3: zero_oracle(r); break;
      case 4: coordinate_change(r, opts.seed + 4); break;
      case 5: trace_fidelity(r); break;
      case 6: flowline_agreement(r); break;
      case 7: wholeplane_geometry(r); break;
      case 8: spiral_invariant(r); break;
      case 9: bound_certs(r, opts.seed + 9); break;
      case 10: monte_carlo(r, opts.seed + 10, opts.mc_paths); break;
      case 11: corner(r); break;
      default: require(false, "criterion 12 compares whole verify runs; use run_acceptance");
    }
  } catch (const Error& e) {
    r.values_ok = false;
    r.detail = "error " + std::string(to_string(e.code())) + ": " + e.what();
    r.data = io::to_json(e);
  }
  finish(r, t0);
  return r;
}

json summary_json(const std::vector<CriterionResult>& results) {
  json out = json::array();
  for (const CriterionResult& r : results)
    out.push_back({{"id", r.id}, {"title", r.title}, {"values_ok", r.values_ok}, {"data", r.data}});
  return out;
}

std::vector<CriterionResult> run_verify(const AcceptanceOptions& opts,
                                        const std::filesystem::path& dir) {
  std::vector<CriterionResult> out;
  for (int id = 1; id < kCriteria; ++id) {
    if (!selected(opts, id) && !selected(opts, kCriteria)) continue;
    CriterionResult r = run_criterion(id, opts);
    char name[32];
    std::snprintf(name, sizeof name, "c%02d.json", id);
    io::write_file(dir / name, json{{"id", r.id}, {"title", r.title}, {"values_ok", r.values_ok}, {"data", r.data}}.dump(2) + "\n");
    for (const Artifact& a : r.artifacts) io::write_file(dir / a.name, a.content);
    out.push_back(std::move(r));
  }
  io::write_file(dir / "summary.json",
                 json{{"seed", opts.seed}, {"mc_paths", opts.mc_paths}, {"criteria", summary_json(out)}}.dump(2) + "\n");
  return out;
}

namespace {

// Files under `dir` relative to it, sorted.
std::vector<std::string> listing(const std::filesystem::path& dir) {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir))
    if (e.is_regular_file()) out.push_back(std::filesystem::relative(e.path(), dir).string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts) {
  if (!selected(opts, kCriteria)) {
    std::vector<CriterionResult> out;
    for (int id = 1; id < kCriteria; ++id)
      if (selected(opts, id)) out.push_back(run_criterion(id, opts));
    return out;
  }
  namespace fs = std::filesystem;
  const fs::path root = opts.scratch ? *opts.scratch : fs::temp_directory_path() / "slerho-acceptance";
  std::error_code ec;
  fs::remove_all(root / "run1", ec);
  fs::remove_all(root / "run2", ec);
  std::vector<CriterionResult> out = run_verify(opts, root / "run1");
  const auto t0 = Clock::now();
  CriterionResult r;
  r.id = kCriteria;
  r.title = "determinism";
  try {
    run_verify(opts, root / "run2");
    const auto a = listing(root / "run1"), b = listing(root / "run2");
    std::size_t differ = 0;
    for (const std::string& f : a)
      if (std::find(b.begin(), b.end(), f) == b.end() ||
          io::read_file(root / "run1" / f) != io::read_file(root / "run2" / f))
        ++differ;
    r.values_ok = a == b && differ == 0 && !a.empty();
    r.detail = std::to_string(a.size()) + " artifacts compared, " + std::to_string(differ) +
               " differ (verify run twice with seed " + std::to_string(opts.seed) + ")";
    r.data = {{"artifacts", a}, {"differing", differ}};
  } catch (const Error& e) {
    r.detail = "error " + std::string(to_string(e.code())) + ": " + e.what();
  }
  finish(r, t0);
  // only the requested criteria are reported
  std::erase_if(out, [&](const CriterionResult& x) { return !selected(opts, x.id); });
  out.push_back(std::move(r));
  return out;
}

std::string format_line(const CriterionResult& r) {
  char head[96];
  std::snprintf(head, sizeof head, "[%s] criterion %2d %-24s (%.2f s", r.pass ? "PASS" : "FAIL", r.id,
                r.title.c_str(), r.seconds);
  std::string s = head;
  if (r.time_limit > 0) s += ", limit " + sci(r.time_limit) + " s";
  s += "): " + r.detail;
  return s;
}

}  // namespace slerho
