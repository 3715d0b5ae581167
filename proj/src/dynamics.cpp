#include "plab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stepper.hpp"

namespace plab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double sup_abs_of(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

// ---------------------------------------------------------------------------
// ProblemSpec

ProblemSpec::ProblemSpec(DirichletDomain domain, Exponent p, SigmaFn sigma,
                         double sigma_lower, double sigma_upper,
                         ReactionFn reaction, std::vector<double> initial,
                         std::optional<PowerHint> exponents,
                         double sigma_check_horizon, std::size_t sigma_samples)
    : domain_(std::move(domain)),
      p_(p),
      sigma_(std::move(sigma)),
      sigma_lower_(sigma_lower),
      sigma_upper_(sigma_upper),
      reaction_(std::move(reaction)),
      initial_(std::move(initial)),
      exponents_(exponents) {
  if (!sigma_ || !reaction_)
    throw Error(ErrorCode::invalid_argument, "sigma and f must be callable");
  if (!domain_.zero_boundary())
    throw Error(ErrorCode::nonzero_boundary_data,
                "the auxiliary problem is posed with zero boundary data");
  if (!(sigma_lower_ > 0.0))
    throw Error(ErrorCode::hypothesis_violated,
                "sigma lower bound delta must be positive");
  if (initial_.size() != domain_.interior_count())
    throw Error(ErrorCode::support_mismatch,
                "initial data must have one value per interior vertex");
  for (std::size_t s = 0; s < initial_.size(); ++s) {
    if (!std::isfinite(initial_[s]))
      throw Error(ErrorCode::non_finite_value, "non-finite initial value");
    if (initial_[s] < 0.0)
      throw Error(ErrorCode::hypothesis_violated,
                  "initial data negative at '" + domain_.interior_ids()[s] + "'");
  }
  const double f0 = reaction_(0.0);
  if (!(std::abs(f0) <= 1e-15))
    throw Error(ErrorCode::hypothesis_violated,
                "f(0) = " + std::to_string(f0) + ", expected 0");
  if (exponents_ && !(exponents_->q > 1.0))
    throw Error(ErrorCode::hypothesis_violated,
                "declared growth exponent q must exceed 1");
  check_sigma(sigma_check_horizon, sigma_samples);
}

void ProblemSpec::check_sigma(double horizon, std::size_t samples) const {
  if (!(horizon > 0.0) || samples < 2) return;
  double observed_max = 0.0;
  for (std::size_t s = 0; s < domain_.interior_count(); ++s) {
    const std::size_t v = domain_.interior()[s];
    for (std::size_t j = 0; j < samples; ++j) {
      const double t =
          horizon * static_cast<double>(j) / static_cast<double>(samples - 1);
      const double value = sigma_(v, t);
      if (!std::isfinite(value))
        throw Error(ErrorCode::non_finite_value,
                    "sigma non-finite at ('" + domain_.interior_ids()[s] +
                        "', t=" + std::to_string(t) + ")");
      if (value < sigma_lower_)
        throw Error(ErrorCode::hypothesis_violated,
                    "sigma below delta at ('" + domain_.interior_ids()[s] +
                        "', t=" + std::to_string(t) + ")");
      if (sigma_upper_ > 0.0 && value > sigma_upper_)
        throw Error(ErrorCode::hypothesis_violated,
                    "sigma above its declared upper bound at ('" +
                        domain_.interior_ids()[s] + "', t=" + std::to_string(t) +
                        ")");
      observed_max = std::max(observed_max, value);
    }
  }
  if (sigma_upper_ <= 0.0) sigma_upper_ = observed_max;
}

std::vector<double> rhs(const ProblemSpec& spec, double t,
                        std::span<const double> v) {
  const DirichletDomain& dom = spec.domain();
  if (v.size() != dom.interior_count())
    throw Error(ErrorCode::support_mismatch,
                "state must have one value per interior vertex");
  std::vector<double> out(v.size());
  p_laplacian_dirichlet(dom, spec.p(), v, out);
  for (std::size_t s = 0; s < v.size(); ++s)
    out[s] += spec.sigma()(dom.interior()[s], t) * spec.reaction()(v[s]);
  return out;
}

// ---------------------------------------------------------------------------
// Adaptive stepper

namespace detail {

namespace {

void rk4_step(const RhsFn& rhs, double t, std::span<const double> y, double h,
              std::vector<double>& k1, std::vector<double>& k2,
              std::vector<double>& k3, std::vector<double>& k4,
              std::vector<double>& scratch, std::vector<double>& out) {
  const std::size_t n = y.size();
  rhs(t, y, k1);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = y[i] + 0.5 * h * k1[i];
  rhs(t + 0.5 * h, scratch, k2);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = y[i] + 0.5 * h * k2[i];
  rhs(t + 0.5 * h, scratch, k3);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = y[i] + h * k3[i];
  rhs(t + h, scratch, k4);
  for (std::size_t i = 0; i < n; ++i)
    out[i] = y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
}

}  // namespace

AdaptiveResult adaptive_rk(const RhsFn& rhs, std::span<const double> y0,
                           const IntegrateOptions& opts, double growth_gate) {
  const std::size_t n = y0.size();
  const double horizon = opts.horizon;
  if (!(horizon > 0.0))
    throw Error(ErrorCode::invalid_argument, "horizon must be positive");
  const double min_step =
      opts.min_step > 0.0 ? opts.min_step : 1e-12 * horizon;
  const double max_step = opts.max_step > 0.0 ? opts.max_step : horizon;
  double h = opts.initial_step > 0.0 ? opts.initial_step : horizon / 1024.0;
  h = std::min(h, max_step);

  if (sup_abs_of(y0) >= opts.blowup_threshold)
    throw Error(ErrorCode::invalid_argument,
                "blow-up threshold must exceed the initial sup");

  std::vector<double> samples = opts.sample_times;
  std::sort(samples.begin(), samples.end());
  std::size_t next_sample = 0;

  AdaptiveResult res;
  res.stats.min_step = std::numeric_limits<double>::infinity();
  std::vector<double> y(y0.begin(), y0.end());
  double t = 0.0;
  res.times.push_back(t);
  res.states.push_back(y);

  std::vector<double> k1(n), k2(n), k3(n), k4(n), scratch(n);
  std::vector<double> ybig(n), yhalf(n), ysmall(n);

  const double tiny = 1e-14 * horizon;
  while (t < horizon - tiny) {
    while (next_sample < samples.size() && samples[next_sample] <= t + tiny)
      ++next_sample;

    double target = horizon;
    bool snap_to_sample = false;
    if (next_sample < samples.size() && samples[next_sample] < horizon) {
      target = samples[next_sample];
      snap_to_sample = true;
    }
    double step = std::min({h, max_step, target - t});
    bool hits_target = step >= target - t - tiny;
    if (hits_target) step = target - t;

    rk4_step(rhs, t, y, step, k1, k2, k3, k4, scratch, ybig);
    rk4_step(rhs, t, y, 0.5 * step, k1, k2, k3, k4, scratch, yhalf);
    rk4_step(rhs, t + 0.5 * step, yhalf, 0.5 * step, k1, k2, k3, k4, scratch,
             ysmall);

    double ratio = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double err = (ysmall[i] - ybig[i]) / 15.0;
      const double tol =
          opts.abs_tol +
          opts.rel_tol * std::max(std::abs(y[i]), std::abs(ysmall[i]));
      const double r = std::abs(err) / tol;
      if (!std::isfinite(r)) {
        ratio = std::numeric_limits<double>::infinity();
        break;
      }
      ratio = std::max(ratio, r);
    }

    if (ratio <= 1.0) {
      for (std::size_t i = 0; i < n; ++i)
        y[i] = ysmall[i] + (ysmall[i] - ybig[i]) / 15.0;
      t = hits_target ? target : t + step;
      if (hits_target && snap_to_sample) ++next_sample;
      res.times.push_back(t);
      res.states.push_back(y);
      ++res.stats.accepted;
      res.stats.min_step = std::min(res.stats.min_step, step);
      res.stats.max_step = std::max(res.stats.max_step, step);

      if (sup_abs_of(y) >= opts.blowup_threshold) {
        res.detected = true;
        res.threshold_time = t;
        res.reason = StopReason::threshold;
        return res;
      }
      const double grow =
          ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
      const double proposed = step * std::clamp(grow, 0.2, 5.0);
      // A step clipped to land on a target says nothing about accuracy;
      // keep the previous trial size in that case.
      h = hits_target && step < h ? std::max(h, proposed) : proposed;
    } else {
      ++res.stats.rejected;
      h = step * std::clamp(0.9 * std::pow(ratio, -0.2), 0.2, 0.9);
    }

    if (h < min_step) {
      if (sup_abs_of(y) >= growth_gate) {
        res.detected = true;
        res.threshold_time = t;
        res.reason = StopReason::underflow_as_blowup;
        return res;
      }
      throw Error(ErrorCode::step_underflow_without_growth,
                  "step collapsed to " + std::to_string(h) + " at t=" +
                      std::to_string(t) + " while the solution stayed bounded");
    }
  }
  return res;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Blow-up time extrapolation

namespace {

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double rms = 0.0;
  double var_intercept = 0.0;
  double var_slope = 0.0;
  double cov = 0.0;
  bool ok = false;
};

LinearFit linear_regression(std::span<const double> x,
                            std::span<const double> y) {
  LinearFit fit;
  const std::size_t n = x.size();
  if (n < 2) return fit;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) return fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy * sxx - sx * sxy) / det;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / static_cast<double>(n));
  const double sigma2 = n > 2 ? ss / static_cast<double>(n - 2) : 0.0;
  fit.var_slope = sigma2 * static_cast<double>(n) / det;
  fit.var_intercept = sigma2 * sxx / det;
  fit.cov = -sigma2 * sx / det;
  fit.ok = true;
  return fit;
}

/// Objective: least squares of log s_i against log(T - t_i); slope fixed to
/// -1/(q-1) when q is known, free otherwise. Returns RMS in log units.
double loglog_rms(std::span<const double> t, std::span<const double> logs,
                  double t_star, std::optional<double> m_fixed) {
  const std::size_t n = t.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double tau = t_star - t[i];
    if (!(tau > 0.0)) return std::numeric_limits<double>::infinity();
    x[i] = std::log(tau);
  }
  if (m_fixed) {
    // log s = A - m x with A free.
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += logs[i] + *m_fixed * x[i];
    const double A = acc / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = logs[i] - (A - *m_fixed * x[i]);
      ss += r * r;
    }
    return std::sqrt(ss / static_cast<double>(n));
  }
  LinearFit fit = linear_regression(x, logs);
  if (!fit.ok) return std::numeric_limits<double>::infinity();
  return fit.rms;
}

double golden_minimize(const std::function<double(double)>& g, double lo,
                       double hi, int iterations) {
  const double inv_phi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = g(c), fd = g(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = g(d);
    }
  }
  return 0.5 * (a + b);
}

BlowupFit fit_tail(std::span<const double> times, std::span<const double> sups,
                   std::optional<double> q_hint, double rel_tol,
                   double abs_tol) {
  BlowupFit out;
  const std::size_t n = times.size();
  const double t_last = times[n - 1];
  const double t_first = times[0];
  const double window = std::max(t_last - t_first, 1e-300);

  auto tol_floor = [&](double t_star) {
    return std::max(100.0 * (rel_tol + abs_tol) * std::max(std::abs(t_star), 1.0),
                    1e-14 * std::max(std::abs(t_star), 1.0));
  };

  if (n < 3) {
    out.t_star = t_last;
    out.fit_residual = window;
    out.uncertainty = std::max(window, tol_floor(t_last));
    return out;
  }

  std::vector<double> logs(n);
  for (std::size_t i = 0; i < n; ++i) logs[i] = std::log(sups[i]);

  std::optional<double> m_fixed;
  if (q_hint && *q_hint > 1.0) m_fixed = 1.0 / (*q_hint - 1.0);

  // Seed tau = T - t_last from the linearizing transform w = s^{1-q},
  // which satisfies w = B (T - t) exactly for pure power growth.
  double tau_seed = 0.1 * window;
  double sigma_T = 0.0;
  if (m_fixed) {
    const double q = *q_hint;
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = std::pow(sups[i], 1.0 - q);
    LinearFit lin = linear_regression(times, w);
    if (lin.ok && lin.slope < 0.0) {
      const double T = -lin.intercept / lin.slope;
      if (T > t_last) {
        tau_seed = T - t_last;
        const double dA = -1.0 / lin.slope;
        const double dB = lin.intercept / (lin.slope * lin.slope);
        sigma_T = std::sqrt(std::max(
            0.0, dA * dA * lin.var_intercept + dB * dB * lin.var_slope +
                     2.0 * dA * dB * lin.cov));
      }
    }
  }

  auto objective = [&](double log_tau) {
    return loglog_rms(times, logs, t_last + std::exp(log_tau), m_fixed);
  };
  const double lo = std::log(std::max(tau_seed * 0.05, 1e-18 * window));
  const double hi = std::log(std::max(tau_seed * 20.0, 1e-12 * window));
  const double log_tau = golden_minimize(objective, lo, hi, 160);
  const double tau = std::exp(log_tau);
  out.t_star = t_last + tau;

  // Map the log-space RMS to time units through d log(T-t)/dT at the last
  // sample, where the fit is most informative.
  const double m_eff = m_fixed ? *m_fixed : 1.0;
  const double rms_log = objective(log_tau);
  out.fit_residual = std::isfinite(rms_log) ? rms_log * tau / m_eff : window;

  // Stability of the estimate under halving the tail.
  double half_diff = 0.0;
  const std::size_t half = n / 2;
  if (n - half >= 3) {
    auto sub_t = times.subspan(half);
    std::vector<double> sub_logs(logs.begin() + half, logs.end());
    auto obj_half = [&](double lt) {
      return loglog_rms(sub_t, sub_logs, t_last + std::exp(lt), m_fixed);
    };
    const double lt_half = golden_minimize(obj_half, lo, hi, 120);
    half_diff = std::abs(std::exp(lt_half) - tau);
  }

  out.uncertainty = std::max({sigma_T, 2.0 * half_diff, out.fit_residual,
                              tol_floor(out.t_star)});
  return out;
}

}  // namespace

BlowupFit fit_blowup_time(std::span<const double> times,
                          std::span<const double> sups,
                          std::optional<double> q_hint, double rel_tol,
                          double abs_tol) {
  if (times.size() != sups.size() || times.empty())
    throw Error(ErrorCode::invalid_argument,
                "fit needs matching nonempty time and sup series");
  return fit_tail(times, sups, q_hint, rel_tol, abs_tol);
}

// ---------------------------------------------------------------------------
// integrate

std::pair<Trajectory, BlowupReport> integrate(const ProblemSpec& spec,
                                              const IntegrateOptions& opts) {
  spec.check_sigma(opts.horizon);
  const DirichletDomain& dom = spec.domain();
  const Exponent& p = spec.p();

  detail::RhsFn f = [&spec, &dom, &p](double t, std::span<const double> y,
                                      std::span<double> dy) {
    p_laplacian_dirichlet(dom, p, y, dy);
    for (std::size_t s = 0; s < y.size(); ++s)
      dy[s] += spec.sigma()(dom.interior()[s], t) * spec.reaction()(y[s]);
  };

  const double sup0 = sup_abs_of(spec.initial());
  const double growth_gate = 1e3 * (1.0 + sup0);
  detail::AdaptiveResult run =
      detail::adaptive_rk(f, spec.initial(), opts, growth_gate);

  Trajectory traj;
  traj.times = std::move(run.times);
  traj.states = std::move(run.states);
  traj.vertex_ids = dom.interior_ids();
  traj.stats = run.stats;

  BlowupReport report;
  report.detected = run.detected;
  report.threshold_time = run.detected ? run.threshold_time : kNaN;
  report.extrapolated_time = kNaN;
  report.fit_residual = kNaN;
  report.time_uncertainty = kNaN;

  if (run.detected) {
    const auto& last = traj.states.back();
    std::size_t arg = 0;
    for (std::size_t s = 1; s < last.size(); ++s)
      if (std::abs(last[s]) > std::abs(last[arg])) arg = s;
    report.blowup_vertex = traj.vertex_ids[arg];

    // Monotone tail of the sup series feeding the singular fit.
    std::vector<double> ts, ss;
    const std::size_t total = traj.times.size();
    std::size_t start = total;
    double prev = std::numeric_limits<double>::infinity();
    while (start > 0 && ts.size() < 24) {
      const double s = sup_abs_of(traj.states[start - 1]);
      if (!(s > 0.0) || s >= prev) break;
      prev = s;
      --start;
      ts.push_back(traj.times[start]);
      ss.push_back(s);
    }
    std::reverse(ts.begin(), ts.end());
    std::reverse(ss.begin(), ss.end());

    std::optional<double> q_hint;
    if (spec.exponents()) q_hint = spec.exponents()->q;
    BlowupFit fit = fit_blowup_time(ts, ss, q_hint, opts.rel_tol, opts.abs_tol);
    report.extrapolated_time = std::max(fit.t_star, report.threshold_time);
    report.fit_residual = fit.fit_residual;
    report.time_uncertainty = fit.uncertainty;
  }

  const double u0_max =
      spec.initial().empty()
          ? 0.0
          : *std::max_element(spec.initial().begin(), spec.initial().end());
  if (u0_max > 0.0) {
    try {
      report.theoretical_bound =
          blowup_bound_F(spec.reaction(), spec.sigma_lower(), p, u0_max);
    } catch (const Error&) {
      report.theoretical_bound = std::nullopt;
    }
  }
  return {std::move(traj), std::move(report)};
}

// ---------------------------------------------------------------------------
// Picard iteration

Trajectory picard_solve(const ProblemSpec& spec, double horizon, double tol,
                        std::size_t max_sweeps, std::size_t grid_per_unit) {
  if (!(horizon > 0.0))
    throw Error(ErrorCode::invalid_argument, "horizon must be positive");
  if (!(tol > 0.0))
    throw Error(ErrorCode::invalid_argument, "tolerance must be positive");
  spec.check_sigma(horizon);

  const DirichletDomain& dom = spec.domain();
  const std::size_t m = dom.interior_count();
  const std::size_t steps = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(horizon * static_cast<double>(grid_per_unit))));
  const std::size_t npts = steps + 1;
  const double h = horizon / static_cast<double>(steps);

  std::vector<double> times(npts);
  for (std::size_t i = 0; i < npts; ++i) times[i] = h * static_cast<double>(i);
  times.back() = horizon;

  std::vector<std::vector<double>> v(npts, spec.initial());
  std::vector<std::vector<double>> g(npts, std::vector<double>(m));
  std::vector<std::vector<double>> w(npts, std::vector<double>(m));

  double prev_dist = std::numeric_limits<double>::infinity();
  int non_decreasing = 0;

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    for (std::size_t i = 0; i < npts; ++i) {
      p_laplacian_dirichlet(dom, spec.p(), v[i], g[i]);
      for (std::size_t s = 0; s < m; ++s)
        g[i][s] +=
            spec.sigma()(dom.interior()[s], times[i]) * spec.reaction()(v[i][s]);
    }
    w[0] = spec.initial();
    for (std::size_t i = 1; i < npts; ++i)
      for (std::size_t s = 0; s < m; ++s)
        w[i][s] = w[i - 1][s] + 0.5 * h * (g[i - 1][s] + g[i][s]);

    double dist = 0.0;
    for (std::size_t i = 0; i < npts; ++i)
      for (std::size_t s = 0; s < m; ++s)
        dist = std::max(dist, std::abs(w[i][s] - v[i][s]));
    v.swap(w);

    if (!std::isfinite(dist))
      throw Error(ErrorCode::no_contraction,
                  "Picard sweep diverged to non-finite values");
    if (dist <= tol) {
      Trajectory traj;
      traj.times = std::move(times);
      traj.states = std::move(v);
      traj.vertex_ids = dom.interior_ids();
      traj.stats.accepted = steps;
      traj.stats.min_step = h;
      traj.stats.max_step = h;
      return traj;
    }
    non_decreasing = dist >= prev_dist ? non_decreasing + 1 : 0;
    if (non_decreasing >= 3)
      throw Error(ErrorCode::no_contraction,
                  "sweep distance non-decreasing for 3 consecutive sweeps "
                  "(last " + std::to_string(dist) + ")");
    prev_dist = dist;
  }
  throw Error(ErrorCode::max_sweeps_exceeded,
              "no contraction to tolerance within " +
                  std::to_string(max_sweeps) + " sweeps");
}

// ---------------------------------------------------------------------------
// sup trajectory

std::vector<SupSample> sup_trajectory(const Trajectory& traj) {
  std::vector<SupSample> out;
  out.reserve(traj.times.size());
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    const auto& st = traj.states[i];
    std::size_t arg = 0;
    for (std::size_t s = 1; s < st.size(); ++s)
      if (st[s] > st[arg]) arg = s;  // ties keep the smaller id
    out.push_back({traj.times[i], st[arg], traj.vertex_ids[arg]});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Blow-up bound F

double blowup_bound_F(const ReactionFn& f, double delta, const Exponent& p,
                      double x_lower, double quad_tol) {
  if (!(x_lower > 0.0))
    throw Error(ErrorCode::invalid_argument, "x_lower must be positive");
  if (!(delta > 0.0))
    throw Error(ErrorCode::invalid_argument, "delta must be positive");
  if (!(quad_tol > 0.0))
    throw Error(ErrorCode::invalid_argument, "quadrature tolerance must be positive");
  const double pe = p.p();

  auto denominator = [&](double s) { return delta * f(s) - std::pow(s, pe - 1.0); };

  // The integrand must stay positive all the way to infinity; sample a
  // geometric ladder before spending quadrature effort.
  for (int k = 0; k < 96; ++k) {
    const double s = x_lower * std::pow(1e9, static_cast<double>(k) / 95.0);
    const double d = denominator(s);
    if (!(d > 0.0))
      throw Error(ErrorCode::nonpositive_denominator,
                  "delta f(s) - s^{p-1} is not positive at s=" +
                      std::to_string(s));
  }

  // Tail substitution s = x/(1-tau) maps [x, inf) to tau in [0, 1); tanh-sinh
  // nodes then absorb the endpoint singularity for p < 3.
  auto integrand = [&](double one_minus_tau) {
    const double s = x_lower / one_minus_tau;
    if (s > 1e250) return 0.0;  // tail decays like s^{2-p}
    const double d = denominator(s);
    if (!(d > 0.0))
      throw Error(ErrorCode::nonpositive_denominator,
                  "delta f(s) - s^{p-1} is not positive at s=" +
                      std::to_string(s));
    return x_lower / (one_minus_tau * one_minus_tau) / d;
  };

  const double half_pi = 1.5707963267948966;
  double previous = kNaN;
  for (int level = 2; level <= 12; ++level) {
    const double h = std::pow(2.0, -level);
    const int jmax = static_cast<int>(std::ceil(4.0 / h));
    double acc = 0.0;
    for (int j = -jmax; j <= jmax; ++j) {
      const double u = h * static_cast<double>(j);
      const double z = half_pi * std::sinh(u);
      const double em = std::exp(-2.0 * z);
      const double tau = 1.0 / (1.0 + em);
      const double one_minus_tau = em / (1.0 + em);
      const double dtau = half_pi * std::cosh(u) * 2.0 * em /
                          ((1.0 + em) * (1.0 + em));
      if (!(one_minus_tau > 0.0) || !(tau > 0.0)) continue;
      const double g = integrand(one_minus_tau);
      acc += h * dtau * g;
    }
    if (std::isfinite(previous) && std::abs(acc - previous) <= 0.5 * quad_tol)
      return acc;
    previous = acc;
  }
  throw Error(ErrorCode::quadrature_failure,
              "tanh-sinh refinement did not reach tolerance " +
                  std::to_string(quad_tol));
}

}  // namespace plab
