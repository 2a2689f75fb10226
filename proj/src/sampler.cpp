#include "slerho/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "parallel.hpp"
#include "slerho/error.hpp"

namespace slerho {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Proportion wilson(std::size_t hits, std::size_t n, double z) {
  Proportion r;
  r.hits = hits;
  r.n = n;
  if (n == 0) return r;
  const double nn = static_cast<double>(n);
  r.p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double centre = (r.p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z / (1 + z2 / nn) * std::sqrt(r.p * (1 - r.p) / nn + z2 / (4 * nn * nn));
  r.lo = std::max(0.0, centre - half);
  r.hi = std::min(1.0, centre + half);
  return r;
}

std::string to_string(PathStop s) {
  switch (s) {
    case PathStop::ReachedT: return "reached-T";
    case PathStop::HitEps: return "hit-eps";
    case PathStop::NumericalBlowup: return "numerical-blowup";
    case PathStop::MaxSteps: return "max-steps";
  }
  return "?";
}

namespace {

using Kind = ForcePoint::Kind;

// Force-point state: x (real), z, or the angle v in the real part.
double drift(Kind k, double rho, double w, cplx f) {
  switch (k) {
    case Kind::BoundaryRadial: return rho / 2 / std::tan((w - f.real()) / 2);
    case Kind::BoundaryChordal: return rho / (w - f.real());
    case Kind::InteriorChordal: return rho * (1.0 / (cplx(w, 0) - f)).real();
  }
  return 0;
}

cplx flow(Kind k, double w, cplx f) {
  switch (k) {
    case Kind::BoundaryRadial: return 1 / std::tan((f.real() - w) / 2);
    case Kind::BoundaryChordal: return 2 / (f.real() - w);
    case Kind::InteriorChordal: return 2.0 / (f - w);
  }
  return 0;
}

double gap_of(Kind k, double w, cplx f) {
  if (k == Kind::BoundaryRadial) return 2 * std::abs(std::sin((f.real() - w) / 2));
  return std::abs(f - w);
}

struct Step {
  double t0, w0;
  cplx f0;
  double h, dw;
  double t, w, gap;
};

void validate(const SimulationConfig& cfg) {
  require(cfg.kappa >= 0 && std::isfinite(cfg.kappa), "kappa must be nonnegative");
  require(cfg.T > 0 && std::isfinite(cfg.T), "T must be positive and finite");
  require(cfg.dt_max > 0, "dt_max must be positive");
  require(cfg.n_paths >= 1, "need at least one path");
  require(cfg.eps_stop >= 0, "eps_stop must be nonnegative");
}

// One Euler-Maruyama path under weight rho_sim. `obs` sees every step and
// may end the path by returning false.
template <class Obs>
PathRecord run_path(const SimulationConfig& cfg, double rho_sim, double rho_dt, std::size_t index,
                    Obs&& obs, std::vector<double>* times = nullptr,
                    std::vector<double>* values = nullptr) {
  std::mt19937_64 rng(splitmix64(cfg.seed + splitmix64(index)));
  std::normal_distribution<double> normal;
  const Kind k = cfg.fp.kind;
  double w = 0, t = 0;
  cplx f = k == Kind::BoundaryRadial ? cplx(cfg.fp.v0, 0) : cfg.fp.location;
  const double gap0 = gap_of(k, w, f);
  const double floor_gap = cfg.eps_stop > 0 ? cfg.eps_stop : 1e-9 * gap0;
  const double rho_scale = std::max(std::abs(rho_dt), 1.0);
  const double sk = std::sqrt(cfg.kappa);

  PathRecord rec;
  rec.min_gap = gap0;
  if (times) {
    times->assign(1, 0.0);
    values->assign(1, 0.0);
  }
  double gap = gap0;
  while (t < cfg.T) {
    if (rec.steps >= cfg.max_steps) {
      rec.stop = PathStop::MaxSteps;
      break;
    }
    double h = std::min(cfg.dt_max, 0.01 * gap * gap / rho_scale);
    if (cfg.kappa > 0) h = std::min(h, 0.01 * gap * gap / cfg.kappa);
    if (cfg.T - t <= h * (1 + 1e-12)) h = cfg.T - t;
    const double mu = drift(k, rho_sim, w, f);
    const double dw = mu * h + sk * std::sqrt(h) * normal(rng);
    Step s{t, w, f, h, dw, 0, 0, 0};
    f += h * flow(k, w, f);
    w += dw;
    t = (h == cfg.T - s.t0) ? cfg.T : t + h;
    ++rec.steps;
    if (!std::isfinite(w) || !std::isfinite(f.real()) || !std::isfinite(f.imag())) {
      rec.stop = PathStop::NumericalBlowup;
      break;
    }
    gap = gap_of(k, w, f);
    s.t = t;
    s.w = w;
    s.gap = gap;
    rec.min_gap = std::min(rec.min_gap, gap);
    if (times) {
      times->push_back(t);
      values->push_back(w);
    }
    if (!obs(s)) break;
    if (gap < floor_gap) {
      rec.stop = PathStop::HitEps;
      rec.hit = cfg.eps_stop > 0;
      rec.hit_time = t;
      break;
    }
  }
  rec.final_value = w;
  rec.final_time = t;
  return rec;
}

}  // namespace

Simulation simulate_drive(const SimulationConfig& cfg) {
  validate(cfg);
  Simulation out;
  out.stats.paths.resize(cfg.n_paths);
  std::vector<std::vector<double>> ts, ws;
  if (cfg.keep_paths) {
    ts.resize(cfg.n_paths);
    ws.resize(cfg.n_paths);
  }
  detail::parallel_for(cfg.n_paths, [&](std::size_t i) {
    out.stats.paths[i] =
        run_path(cfg, cfg.fp.rho, cfg.fp.rho, i, [](const Step&) { return true; },
                 cfg.keep_paths ? &ts[i] : nullptr, cfg.keep_paths ? &ws[i] : nullptr);
  });
  std::size_t hits = 0;
  double mean = 0, m2 = 0;
  for (std::size_t i = 0; i < cfg.n_paths; ++i) {
    const PathRecord& r = out.stats.paths[i];
    hits += r.hit;
    const double d = r.final_value - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (r.final_value - mean);
  }
  out.stats.hit = wilson(hits, cfg.n_paths);
  out.stats.mean_final = mean;
  out.stats.var_final = cfg.n_paths > 1 ? m2 / static_cast<double>(cfg.n_paths - 1) : 0;
  if (cfg.keep_paths) {
    const Setting s = cfg.fp.setting();
    for (std::size_t i = 0; i < cfg.n_paths; ++i)
      out.drives.push_back(DrivingFunction::sampled(s, std::move(ts[i]), std::move(ws[i]),
                                                    "sle-kappa-rho"));
  }
  return out;
}

Proportion tube_probability(const SimulationConfig& cfg, const DrivingFunction& center,
                            double radius) {
  validate(cfg);
  require(radius > 0, "tube radius must be positive");
  require(center.horizon() >= cfg.T, "tube center must be defined on [0, T]");
  SimulationConfig c = cfg;
  c.eps_stop = 0;
  std::vector<unsigned char> inside(cfg.n_paths, 0);
  detail::parallel_for(cfg.n_paths, [&](std::size_t i) {
    bool ok = std::abs(center(0)) < radius;
    const PathRecord r = run_path(c, c.fp.rho, c.fp.rho, i, [&](const Step& s) {
      if (std::abs(s.w - center(s.t)) >= radius) ok = false;
      return ok;
    });
    inside[i] = ok && r.stop == PathStop::ReachedT;
  });
  std::size_t hits = 0;
  for (unsigned char v : inside) hits += v;
  return wilson(hits, cfg.n_paths);
}

std::vector<LevelEstimate> hitting_probabilities(const SimulationConfig& cfg,
                                                 std::vector<double> levels,
                                                 double proposal_rho) {
  validate(cfg);
  require(cfg.kappa > 0, "importance sampling needs kappa > 0");
  require(!levels.empty(), "need at least one level");
  std::sort(levels.begin(), levels.end(), std::greater<>());
  require(levels.back() > 0, "levels must be positive");
  SimulationConfig c = cfg;
  c.eps_stop = levels.back();
  const double rho = cfg.fp.rho;
  const double rho_dt = std::max(std::abs(rho), std::abs(proposal_rho));
  const std::size_t L = levels.size();
  std::vector<double> weight(cfg.n_paths * L, 0.0);

  detail::parallel_for(cfg.n_paths, [&](std::size_t i) {
    double logw = 0;
    std::size_t next = 0;
    run_path(c, proposal_rho, rho_dt, i, [&](const Step& s) {
      const double mq = drift(c.fp.kind, proposal_rho, s.w0, s.f0) * s.h;
      const double mp = drift(c.fp.kind, rho, s.w0, s.f0) * s.h;
      logw += ((s.dw - mq) * (s.dw - mq) - (s.dw - mp) * (s.dw - mp)) / (2 * c.kappa * s.h);
      while (next < L && s.gap < levels[next]) weight[i * L + next++] = std::exp(logw);
      return next < L;
    });
  });

  std::vector<LevelEstimate> out(L);
  const double n = static_cast<double>(cfg.n_paths);
  for (std::size_t l = 0; l < L; ++l) {
    double mean = 0, m2 = 0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < cfg.n_paths; ++i) {
      const double x = weight[i * L + l];
      hits += x > 0;
      const double d = x - mean;
      mean += d / static_cast<double>(i + 1);
      m2 += d * (x - mean);
    }
    LevelEstimate& e = out[l];
    e.eps = levels[l];
    e.p = mean;
    e.hits = hits;
    e.se = cfg.n_paths > 1 ? std::sqrt(m2 / (n - 1) / n) : 0;
    e.lo = std::max(0.0, mean - 1.959963984540054 * e.se);
    e.hi = mean + 1.959963984540054 * e.se;
  }
  return out;
}

double loglog_slope(const std::vector<double>& eps, const std::vector<double>& p) {
  require(eps.size() == p.size() && eps.size() >= 2, "need at least two points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(eps.size());
  for (std::size_t i = 0; i < eps.size(); ++i) {
    require(eps[i] > 0 && p[i] > 0, "log-log fit needs positive values");
    const double x = std::log(eps[i]), y = std::log(p[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  require(den > 0, "levels must be distinct");
  return (n * sxy - sx * sy) / den;
}

}  // namespace slerho
