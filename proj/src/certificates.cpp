#include "plab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "stepper.hpp"

namespace plab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string format_time(double t) {
  std::ostringstream os;
  os.precision(12);
  os << t;
  return os.str();
}

std::string format_value(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

/// Linear interpolation of a trajectory at time t (clamped to its range).
void sample_state(const Trajectory& tr, double t, std::vector<double>& out) {
  const auto& ts = tr.times;
  if (t <= ts.front()) {
    out = tr.states.front();
    return;
  }
  if (t >= ts.back()) {
    out = tr.states.back();
    return;
  }
  const auto it = std::upper_bound(ts.begin(), ts.end(), t);
  const std::size_t i1 = static_cast<std::size_t>(it - ts.begin());
  const std::size_t i0 = i1 - 1;
  const double dt = ts[i1] - ts[i0];
  const double w = dt > 0.0 ? (t - ts[i0]) / dt : 0.0;
  const auto& s0 = tr.states[i0];
  const auto& s1 = tr.states[i1];
  out.resize(s0.size());
  for (std::size_t k = 0; k < s0.size(); ++k)
    out[k] = (1.0 - w) * s0[k] + w * s1[k];
}

/// Strictly increasing tail of a positive scalar series, newest last, at most
/// `cap` points. Feeds the singular-time fit.
void increasing_tail(std::span<const double> times,
                     std::span<const double> values, std::size_t cap,
                     std::vector<double>& ts, std::vector<double>& ss) {
  ts.clear();
  ss.clear();
  double prev = std::numeric_limits<double>::infinity();
  std::size_t i = times.size();
  while (i > 0 && ts.size() < cap) {
    const double s = values[i - 1];
    if (!(s > 0.0) || s >= prev) break;
    prev = s;
    --i;
    ts.push_back(times[i]);
    ss.push_back(s);
  }
  std::reverse(ts.begin(), ts.end());
  std::reverse(ss.begin(), ss.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// Comparison of two trajectories

ComparisonReport check_comparison(const Trajectory& u, const Trajectory& v,
                                  const DirichletDomain& dom) {
  if (u.vertex_ids != dom.interior_ids() || v.vertex_ids != dom.interior_ids())
    throw Error(ErrorCode::domain_mismatch,
                "trajectory columns must match the domain interior");
  if (u.times.empty() || v.times.empty())
    throw Error(ErrorCode::invalid_argument, "empty trajectory");

  const double lo = std::max(u.times.front(), v.times.front());
  const double hi = std::min(u.times.back(), v.times.back());
  if (!(hi >= lo))
    throw Error(ErrorCode::invalid_argument,
                "trajectories do not overlap in time");

  std::vector<double> grid;
  grid.reserve(u.times.size() + v.times.size());
  for (double t : u.times)
    if (t >= lo && t <= hi) grid.push_back(t);
  for (double t : v.times)
    if (t >= lo && t <= hi) grid.push_back(t);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  if (grid.empty()) grid.push_back(lo);

  const std::size_t m = dom.interior_count();
  std::vector<double> us, vs;

  ComparisonReport rep;
  double scale = 0.0;
  for (double t : grid) {
    sample_state(u, t, us);
    sample_state(v, t, vs);
    for (std::size_t s = 0; s < m; ++s)
      scale = std::max({scale, std::abs(us[s]), std::abs(vs[s])});
  }
  rep.scale = scale;
  const double slack = 1e-9 * (1.0 + scale);

  rep.min_gap = std::numeric_limits<double>::infinity();
  rep.holds = true;
  for (double t : grid) {
    sample_state(u, t, us);
    sample_state(v, t, vs);
    for (std::size_t s = 0; s < m; ++s) {
      const double gap = us[s] - vs[s];
      rep.min_gap = std::min(rep.min_gap, gap);
      if (gap < -slack && rep.holds) {
        rep.holds = false;
        rep.violation = ComparisonReport::Witness{dom.interior_ids()[s], t, gap};
      }
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// The scalar Bernoulli problem h' = -a h + b h^q

double h_ode_blowup_closed_form(double a, double b, double q, double h0) {
  if (!(a > 0.0) || !(b > 0.0))
    throw Error(ErrorCode::invalid_argument, "a and b must be positive");
  if (!(q > 1.0))
    throw Error(ErrorCode::invalid_argument, "q must exceed 1");
  if (!(h0 > 0.0) || !std::isfinite(h0))
    throw Error(ErrorCode::invalid_argument, "h0 must be positive and finite");
  const double r = b / a;
  const double w0 = std::pow(h0, 1.0 - q);
  if (!(r > w0))
    throw Error(ErrorCode::below_equilibrium,
                "h0 = " + format_value(h0) + " does not exceed the equilibrium " +
                    format_value(std::pow(a / b, 1.0 / (q - 1.0))));
  return std::log(r / (r - w0)) / ((q - 1.0) * a);
}

HOdeResult h_ode_solve(double a, double b, double q, double h0,
                       const IntegrateOptions& opts) {
  // Reuses the closed form's validation, including below_equilibrium.
  (void)h_ode_blowup_closed_form(a, b, q, h0);

  detail::RhsFn rhs = [a, b, q](double, std::span<const double> y,
                                std::span<double> dy) {
    const double h = y[0];
    dy[0] = -a * h + (h > 0.0 ? b * std::pow(h, q) : 0.0);
  };
  const double y0[1] = {h0};
  detail::AdaptiveResult run =
      detail::adaptive_rk(rhs, y0, opts, 1e3 * (1.0 + h0));

  HOdeResult out;
  out.times = std::move(run.times);
  out.values.reserve(run.states.size());
  for (const auto& st : run.states) out.values.push_back(st[0]);

  out.blowup_time = kNaN;
  out.fit_residual = kNaN;
  out.time_uncertainty = kNaN;
  if (run.detected) {
    std::vector<double> ts, ss;
    increasing_tail(out.times, out.values, 24, ts, ss);
    const BlowupFit fit =
        fit_blowup_time(ts, ss, q, opts.rel_tol, opts.abs_tol);
    out.blowup_time = std::max(fit.t_star, run.threshold_time);
    out.fit_residual = fit.fit_residual;
    out.time_uncertainty = fit.uncertainty;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Separable subsolution certificate

double threshold_initial(const EigenPair& pair, double C, double delta,
                         double q) {
  if (!(C > 0.0) || !(delta > 0.0))
    throw Error(ErrorCode::invalid_argument, "C and delta must be positive");
  if (!(q > 1.0))
    throw Error(ErrorCode::invalid_argument, "q must exceed 1");
  if (!(pair.lambda > 0.0) || !(pair.phi_min > 0.0) || !(pair.phi_sup > 0.0))
    throw Error(ErrorCode::invalid_argument,
                "eigenpair must have positive lambda and positive phi");
  const double num = pair.lambda * std::pow(pair.phi_sup, pair.p - 2.0);
  const double den = C * delta * std::pow(pair.phi_min, q);
  return std::pow(num / den, 1.0 / (q - 1.0));
}

SubsolutionCertificate build_subsolution(const DirichletDomain& dom,
                                         const Exponent& p, double q, double C,
                                         double delta, const SigmaFn& sigma,
                                         const ReactionFn& f,
                                         const SubsolutionOptions& opts) {
  if (!(q > 1.0))
    throw Error(ErrorCode::hypothesis_violated,
                "growth exponent q must exceed 1");
  if (!(C > 0.0) || !(delta > 0.0))
    throw Error(ErrorCode::invalid_argument, "C and delta must be positive");
  if (!sigma || !f)
    throw Error(ErrorCode::invalid_argument, "sigma and f must be callable");
  if (!dom.zero_boundary())
    throw Error(ErrorCode::nonzero_boundary_data,
                "the separable subsolution needs zero boundary data");

  SubsolutionCertificate cert;
  cert.eigenpair = first_eigenpair(dom, p, opts.eigen);
  cert.q = q;
  cert.C = C;
  cert.delta = delta;

  const double pe = p.p();
  const double phi0 = cert.eigenpair.phi_min;
  cert.a = cert.eigenpair.lambda * std::pow(cert.eigenpair.phi_sup, pe - 2.0);
  cert.b = C * delta * std::pow(phi0, q);
  cert.equilibrium = std::pow(cert.a / cert.b, 1.0 / (q - 1.0));
  cert.activation_threshold = threshold_initial(cert.eigenpair, C, delta, q);
  cert.eps = opts.eps > 0.0 ? opts.eps : 0.1 * cert.equilibrium;
  cert.h0 = cert.equilibrium + cert.eps;
  cert.h_blowup_time = h_ode_blowup_closed_form(cert.a, cert.b, q, cert.h0);

  IntegrateOptions ode = opts.ode;
  if (ode.horizon <= 0.0) ode.horizon = 2.0 * cert.h_blowup_time;
  cert.h = h_ode_solve(cert.a, cert.b, q, cert.h0, ode);

  // Growth hypothesis f(s) >= C s^q over the range the subsolution visits.
  const double f0 = f(0.0);
  if (!(std::abs(f0) <= 1e-15))
    throw Error(ErrorCode::hypothesis_violated,
                "f(0) = " + format_value(f0) + ", expected 0");
  const double hmax =
      *std::max_element(cert.h.values.begin(), cert.h.values.end());
  double smax = hmax * cert.eigenpair.phi_sup;
  const double smin = std::max(1e-12 * cert.h0 * phi0,
                               std::numeric_limits<double>::min());
  if (!(smax > smin)) smax = 10.0 * smin;
  const std::size_t nf = std::max<std::size_t>(2, opts.reaction_samples);
  for (std::size_t j = 0; j < nf; ++j) {
    const double s =
        smin * std::pow(smax / smin,
                        static_cast<double>(j) / static_cast<double>(nf - 1));
    const double want = C * std::pow(s, q);
    const double have = f(s);
    if (!std::isfinite(have))
      throw Error(ErrorCode::non_finite_value,
                  "f non-finite at s=" + format_value(s));
    if (have < want - 1e-9 * (1.0 + want))
      throw Error(ErrorCode::hypothesis_violated,
                  "f(s) = " + format_value(have) + " falls below C s^q = " +
                      format_value(want) + " at s=" + format_value(s));
  }

  // Lower-bound hypothesis sigma >= delta over the certificate's window.
  const double t_end = cert.h.times.back();
  const std::size_t nt = std::max<std::size_t>(2, opts.sigma_time_samples);
  for (std::size_t slot = 0; slot < dom.interior_count(); ++slot) {
    const std::size_t x = dom.interior()[slot];
    for (std::size_t j = 0; j < nt; ++j) {
      const double t =
          t_end * static_cast<double>(j) / static_cast<double>(nt - 1);
      const double val = sigma(x, t);
      if (!std::isfinite(val))
        throw Error(ErrorCode::non_finite_value,
                    "sigma non-finite at ('" + dom.interior_ids()[slot] +
                        "', t=" + format_time(t) + ")");
      if (val < delta - 1e-12 * (1.0 + delta))
        throw Error(ErrorCode::hypothesis_violated,
                    "sigma = " + format_value(val) + " falls below delta = " +
                        format_value(delta) + " at ('" +
                        dom.interior_ids()[slot] + "', t=" + format_time(t) +
                        ")");
    }
  }

  // The candidate v(x,t) = h(t) phi(x) on the h grid.
  const std::size_t m = dom.interior_count();
  const auto& phi = cert.eigenpair.phi.values();
  const std::size_t npts = cert.h.times.size();
  cert.vbar.times = cert.h.times;
  cert.vbar.vertex_ids = dom.interior_ids();
  cert.vbar.states.resize(npts, std::vector<double>(m));
  for (std::size_t i = 0; i < npts; ++i)
    for (std::size_t s = 0; s < m; ++s)
      cert.vbar.states[i][s] = cert.h.values[i] * phi[s];

  // Defining inequality v_t - Delta_p v - sigma f(v) <= 0, v_t analytic from
  // the ODE right-hand side.
  std::vector<std::vector<double>> resid(npts, std::vector<double>(m));
  std::vector<double> dp(m);
  double scale = 0.0;
  for (std::size_t i = 0; i < npts; ++i) {
    const double t = cert.h.times[i];
    const double h = cert.h.values[i];
    const double hprime = -cert.a * h + cert.b * std::pow(h, q);
    p_laplacian_dirichlet(dom, p, cert.vbar.states[i], dp);
    for (std::size_t s = 0; s < m; ++s) {
      const double vt = hprime * phi[s];
      const double sf = sigma(dom.interior()[s], t) * f(cert.vbar.states[i][s]);
      resid[i][s] = vt - dp[s] - sf;
      scale = std::max({scale, std::abs(vt), std::abs(dp[s]), std::abs(sf)});
    }
  }
  cert.residual_scale = scale;
  const double slack = 1e-9 * (1.0 + scale);
  cert.residual_max = -std::numeric_limits<double>::infinity();
  for (const auto& row : resid)
    for (double r : row) cert.residual_max = std::max(cert.residual_max, r);
  if (cert.residual_max > slack) {
    for (std::size_t i = 0; i < npts; ++i)
      for (std::size_t s = 0; s < m; ++s)
        if (resid[i][s] > slack)
          throw Error(ErrorCode::hypothesis_violated,
                      "subsolution inequality fails at ('" +
                          dom.interior_ids()[s] + "', t=" +
                          format_time(cert.h.times[i]) + "): residual " +
                          format_value(resid[i][s]) + " exceeds slack " +
                          format_value(slack));
  }
  return cert;
}

// ---------------------------------------------------------------------------
// Scenario drivers

namespace {

std::vector<double> restrict_to_interior(const VertexField& u0,
                                         const DirichletDomain& dom) {
  const WeightedGraph& g = dom.graph();
  if (u0.ids() != g.vertex_ids())
    throw Error(ErrorCode::domain_mismatch,
                "initial data must cover every graph vertex");
  for (std::size_t v = 0; v < u0.size(); ++v)
    if (u0[v] < 0.0)
      throw Error(ErrorCode::hypothesis_violated,
                  "initial data negative at '" + u0.ids()[v] + "'");
  std::vector<double> out(dom.interior_count());
  for (std::size_t s = 0; s < out.size(); ++s)
    out[s] = u0[dom.interior()[s]];
  return out;
}

Trajectory restrict_columns(const Trajectory& full,
                            const DirichletDomain& dom) {
  Trajectory out;
  out.times = full.times;
  out.vertex_ids = dom.interior_ids();
  out.stats = full.stats;
  out.states.resize(full.states.size(),
                    std::vector<double>(dom.interior_count()));
  for (std::size_t i = 0; i < full.states.size(); ++i)
    for (std::size_t s = 0; s < dom.interior_count(); ++s)
      out.states[i][s] = full.states[i][dom.interior()[s]];
  return out;
}

}  // namespace

ScenarioResult scenario_theorem_1(const DirichletDomain& dom, const Exponent& p,
                                  double eps, double delta, const SigmaFn& sigma,
                                  const VertexField& u0,
                                  const ScenarioOptions& opts) {
  if (!(eps > 0.0))
    throw Error(ErrorCode::invalid_argument, "eps must be positive");
  if (!(delta > 0.0))
    throw Error(ErrorCode::invalid_argument, "delta must be positive");

  std::vector<double> u0i = restrict_to_interior(u0, dom);
  const double u0max = *std::max_element(u0i.begin(), u0i.end());
  if (!(u0max > 0.0))
    throw Error(ErrorCode::hypothesis_violated,
                "initial data vanishes on the interior");

  ScenarioResult res;
  res.theorem_tag = opts.equality_remark ? "equality-remark" : "thm-1.1";
  res.lambda1 = kNaN;

  const double pe = p.p();
  const double coeff = 1.0 / delta + eps;
  ReactionFn f = [coeff, pe](double s) { return coeff * z_power(s, pe); };

  const double bound = blowup_bound_F(f, delta, p, u0max);

  IntegrateOptions io = opts.integrator;
  if (io.horizon <= 0.0) io.horizon = 2.0 * bound;

  ProblemSpec spec(dom, p, sigma, delta, 0.0, f, u0i,
                   PowerHint{pe - 1.0, coeff}, io.horizon);
  auto [traj, report] = integrate(spec, io);
  res.trajectory = std::move(traj);
  res.report = std::move(report);
  if (!res.report.theoretical_bound) res.report.theoretical_bound = bound;

  res.as_predicted = true;
  if (!res.report.detected) {
    res.as_predicted = false;
    res.failures.push_back("no blow-up detected within the horizon " +
                           format_time(io.horizon));
  } else if (res.report.extrapolated_time > 1.02 * bound) {
    res.as_predicted = false;
    res.failures.push_back(
        "extrapolated blow-up time " + format_time(res.report.extrapolated_time) +
        " exceeds the bound " + format_time(bound) + " by more than 2 percent");
  }

  if (opts.run_full_graph) {
    const WeightedGraph& g = dom.graph();
    std::vector<std::size_t> all(g.vertex_count());
    std::iota(all.begin(), all.end(), 0);
    DirichletDomain whole(dom.graph_ptr(), std::move(all));
    ProblemSpec full_spec(whole, p, sigma, delta, 0.0, f, u0.values(),
                          PowerHint{pe - 1.0, coeff}, io.horizon);
    auto [ftraj, freport] = integrate(full_spec, io);
    (void)freport;
    Trajectory on_domain = restrict_columns(ftraj, dom);
    res.full_graph_trajectory = std::move(ftraj);
    res.comparison = check_comparison(on_domain, res.trajectory, dom);
    if (!res.comparison->holds) {
      res.as_predicted = false;
      res.failures.push_back(
          "the unrestricted solution fails to dominate the zero-boundary one");
    }
  }
  return res;
}

ScenarioResult scenario_theorem_2(const DirichletDomain& dom, const Exponent& p,
                                  double q, double C, double delta,
                                  const SigmaFn& sigma, const VertexField& u0,
                                  const ScenarioOptions& opts) {
  if (!(C > 0.0) || !(delta > 0.0))
    throw Error(ErrorCode::invalid_argument, "C and delta must be positive");
  const double pe = p.p();
  if (!(q > 1.0) || q > pe - 1.0)
    throw Error(ErrorCode::hypothesis_violated,
                "q = " + format_value(q) + " outside (1, p-1] with p = " +
                    format_value(pe));

  std::vector<double> u0i = restrict_to_interior(u0, dom);

  ScenarioResult res;
  res.theorem_tag = opts.equality_remark ? "equality-remark" : "thm-1.2";

  EigenPair pair = first_eigenpair(dom, p, opts.eigen);
  res.lambda1 = pair.lambda;
  const double thr = threshold_initial(pair, C, delta, q);
  const double minu = *std::min_element(u0i.begin(), u0i.end());
  if (!(minu > thr))
    throw Error(ErrorCode::hypothesis_violated,
                "min initial value " + format_value(minu) +
                    " does not exceed the eigenpair threshold " +
                    format_value(thr));

  ReactionFn f = [C, q](double s) { return C * z_power(s, q + 1.0); };

  SubsolutionOptions sub;
  sub.eigen = opts.eigen;
  sub.eps = 0.5 * (minu - thr);
  try {
    res.certificate = build_subsolution(dom, p, q, C, delta, sigma, f, sub);
  } catch (const Error& e) {
    res.certificate_error = e.what();
  }

  const double a = pair.lambda * std::pow(pair.phi_sup, pe - 2.0);
  const double b = C * delta * std::pow(pair.phi_min, q);
  const double t_guide = res.certificate
                             ? res.certificate->h_blowup_time
                             : h_ode_blowup_closed_form(a, b, q, thr + sub.eps);

  IntegrateOptions io = opts.integrator;
  if (io.horizon <= 0.0)
    io.horizon = (res.certificate ? 2.0 : 4.0) * t_guide;

  ProblemSpec spec(dom, p, sigma, delta, 0.0, f, u0i, PowerHint{q, C},
                   io.horizon);
  auto [traj, report] = integrate(spec, io);
  res.trajectory = std::move(traj);
  res.report = std::move(report);

  res.as_predicted = true;
  if (!res.report.detected) {
    res.as_predicted = false;
    res.failures.push_back("no blow-up detected within the horizon " +
                           format_time(io.horizon));
  }
  if (res.certificate) {
    res.comparison =
        check_comparison(res.trajectory, res.certificate->vbar, dom);
    if (!res.comparison->holds) {
      res.as_predicted = false;
      res.failures.push_back(
          "solution drops below the separable subsolution");
    }
    if (res.report.detected &&
        res.report.extrapolated_time >
            1.02 * res.certificate->h_blowup_time) {
      res.as_predicted = false;
      res.failures.push_back("extrapolated blow-up time " +
                             format_time(res.report.extrapolated_time) +
                             " exceeds the subsolution bound " +
                             format_time(res.certificate->h_blowup_time) +
                             " by more than 2 percent");
    }
  }
  return res;
}

}  // namespace plab
