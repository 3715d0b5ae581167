#include <doctest.h>

#include <cmath>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "plab/dynamics.hpp"

using namespace plab;

namespace {

std::shared_ptr<const WeightedGraph> shared(WeightedGraph g) {
  return std::make_shared<const WeightedGraph>(std::move(g));
}

DirichletDomain single_vertex() {
  auto g = shared(generate_path(2));
  return DirichletDomain(g, {0});
}

const SigmaFn sigma_one = [](std::size_t, double) { return 1.0; };
const ReactionFn zero_reaction = [](double) { return 0.0; };

ProblemSpec decay_spec() {
  // One interior vertex with f = 0: u' = -u^{p-1}. For p = 3, u0 = 1 the
  // solution is u(t) = 1 / (1 + t).
  return ProblemSpec(single_vertex(), Exponent(3.0), sigma_one, 1.0, 1.0,
                     zero_reaction, {1.0});
}

ProblemSpec blowup_spec() {
  // u' = -u^2 + 1.5 u^2 = 0.5 u^2, u0 = 2: blows up at t = 1.
  return ProblemSpec(single_vertex(), Exponent(3.0), sigma_one, 1.0, 1.0,
                     [](double s) { return 1.5 * z_power(s, 3.0); }, {2.0},
                     PowerHint{2.0, 0.5});
}

}  // namespace

TEST_SUITE("problem validation") {
  TEST_CASE("initial data must be nonnegative and sized to the interior") {
    try {
      ProblemSpec bad(single_vertex(), Exponent(3.0), sigma_one, 1.0, 1.0,
                      zero_reaction, {-0.5});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::hypothesis_violated);
    }
    try {
      ProblemSpec bad(single_vertex(), Exponent(3.0), sigma_one, 1.0, 1.0,
                      zero_reaction, {1.0, 2.0});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::support_mismatch);
    }
  }

  TEST_CASE("reaction must vanish at zero") {
    try {
      ProblemSpec bad(single_vertex(), Exponent(3.0), sigma_one, 1.0, 1.0,
                      [](double s) { return s + 1.0; }, {1.0});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::hypothesis_violated);
    }
  }

  TEST_CASE("sigma must respect its declared lower bound") {
    try {
      ProblemSpec bad(single_vertex(), Exponent(3.0),
                      [](std::size_t, double t) { return 1.0 - t; }, 0.9, 2.0,
                      zero_reaction, {1.0});
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::hypothesis_violated);
    }
  }

  TEST_CASE("an omitted upper bound is derived from samples") {
    const ProblemSpec spec(single_vertex(), Exponent(3.0),
                           [](std::size_t, double t) { return 1.0 + t; }, 1.0,
                           0.0, zero_reaction, {1.0}, std::nullopt, 2.0);
    CHECK(spec.sigma_upper() >= 3.0 - 1e-9);
  }
}

TEST_SUITE("right-hand side") {
  TEST_CASE("zero state gives zero velocity") {
    const ProblemSpec spec = blowup_spec();
    const double v[1] = {0.0};
    const std::vector<double> dv = rhs(spec, 0.0, std::span<const double>(v, 1));
    CHECK(dv[0] == 0.0);
  }

  TEST_CASE("diffusion and reaction add up") {
    // v = 1: Delta_p v = -1, sigma f(v) = 2, so v' = 1.
    const ProblemSpec spec(single_vertex(), Exponent(3.0), sigma_one, 1.0, 1.0,
                           [](double s) { return 2.0 * s * s; }, {1.0});
    const double v[1] = {1.0};
    const std::vector<double> dv = rhs(spec, 0.0, std::span<const double>(v, 1));
    CHECK(dv[0] == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("without reaction the velocity is pure diffusion") {
    const ProblemSpec spec = decay_spec();
    const double v[1] = {2.0};
    const std::vector<double> dv = rhs(spec, 0.0, std::span<const double>(v, 1));
    CHECK(dv[0] == doctest::Approx(-4.0).epsilon(1e-12));
  }
}

TEST_SUITE("adaptive integration") {
  TEST_CASE("pure diffusion matches the closed-form decay") {
    IntegrateOptions opts;
    opts.horizon = 10.0;
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) opts.sample_times.push_back(t);
    const auto [traj, report] = integrate(decay_spec(), opts);
    CHECK(!report.detected);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double expected = 1.0 / (1.0 + traj.times[i]);
      CHECK(std::abs(traj.states[i][0] - expected) <= 1e-6 * expected);
    }
    CHECK(traj.times.back() == doctest::Approx(10.0));
  }

  TEST_CASE("superlinear reaction blows up at the predicted time") {
    IntegrateOptions opts;
    opts.horizon = 2.0;
    const auto [traj, report] = integrate(blowup_spec(), opts);
    CHECK(report.detected);
    REQUIRE(report.blowup_vertex.has_value());
    CHECK(*report.blowup_vertex == "v0");
    CHECK(report.extrapolated_time == doctest::Approx(1.0).epsilon(0.01));
    CHECK(report.threshold_time <= 1.0);
    CHECK(traj.states.back()[0] >= 1e8);
  }

  TEST_CASE("zero initial data stays zero") {
    const ProblemSpec spec(single_vertex(), Exponent(3.0), sigma_one, 1.0, 1.0,
                           [](double s) { return s * s; }, {0.0});
    IntegrateOptions opts;
    opts.horizon = 3.0;
    const auto [traj, report] = integrate(spec, opts);
    CHECK(!report.detected);
    for (const auto& state : traj.states) CHECK(state[0] == 0.0);
  }

  TEST_CASE("nonnegative data stays nonnegative under diffusion") {
    auto g = shared(generate_path(5));
    const DirichletDomain dom(g, {1, 2, 3});
    const ProblemSpec spec(dom, Exponent(3.0), sigma_one, 1.0, 1.0,
                           zero_reaction, {0.0, 2.0, 0.0});
    IntegrateOptions opts;
    opts.horizon = 4.0;
    const auto [traj, report] = integrate(spec, opts);
    CHECK(!report.detected);
    for (const auto& state : traj.states)
      for (double v : state) CHECK(v >= -1e-12);
  }
}

TEST_SUITE("picard iteration") {
  TEST_CASE("agrees with the closed-form decay") {
    const Trajectory traj = picard_solve(decay_spec(), 1.0, 1e-10);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      const double expected = 1.0 / (1.0 + traj.times[i]);
      CHECK(std::abs(traj.states[i][0] - expected) <= 1e-5);
    }
  }

  TEST_CASE("agrees with the adaptive integrator on shared sample times") {
    auto g = shared(generate_star(3));
    const DirichletDomain dom(g, {g->index_of("c")});
    const ProblemSpec spec(dom, Exponent(3.0),
                           [](std::size_t, double t) { return 1.0 + 0.5 * t; },
                           1.0, 0.0, [](double s) { return 0.5 * s * s; },
                           {1.0}, std::nullopt, 1.0);
    const Trajectory pic = picard_solve(spec, 0.5, 1e-10);
    IntegrateOptions opts;
    opts.horizon = 0.5;
    opts.sample_times = pic.times;
    const auto [ref, report] = integrate(spec, opts);
    REQUIRE(!report.detected);
    REQUIRE(ref.times.size() >= pic.times.size());
    // Match picard grid points against the dense output.
    std::size_t j = 0;
    for (std::size_t i = 0; i < pic.times.size(); ++i) {
      while (j < ref.times.size() &&
             ref.times[j] < pic.times[i] - 1e-12)
        ++j;
      REQUIRE(j < ref.times.size());
      CHECK(std::abs(ref.states[j][0] - pic.states[i][0]) <= 1e-5);
    }
  }

  TEST_CASE("zero data is a fixed point") {
    const ProblemSpec spec(single_vertex(), Exponent(3.0), sigma_one, 1.0, 1.0,
                           [](double s) { return s * s; }, {0.0});
    const Trajectory traj = picard_solve(spec, 2.0, 1e-12);
    for (const auto& state : traj.states) CHECK(state[0] == 0.0);
  }

  TEST_CASE("fails to contract past the blow-up time") {
    try {
      (void)picard_solve(blowup_spec(), 2.0, 1e-10, 60);
      FAIL("expected an error");
    } catch (const Error& e) {
      const bool expected = e.code() == ErrorCode::no_contraction ||
                            e.code() == ErrorCode::max_sweeps_exceeded;
      CHECK(expected);
    }
  }
}

TEST_SUITE("sup trajectory") {
  TEST_CASE("tracks the max with lexicographic tie-break") {
    Trajectory traj;
    traj.vertex_ids = {"a", "b"};
    traj.times = {0.0, 1.0};
    traj.states = {{1.0, 1.0}, {1.0, 2.0}};
    const std::vector<SupSample> sup = sup_trajectory(traj);
    REQUIRE(sup.size() == 2);
    CHECK(sup[0].value == 1.0);
    CHECK(sup[0].vertex == "a");
    CHECK(sup[1].value == 2.0);
    CHECK(sup[1].vertex == "b");
  }

  TEST_CASE("diffusion sup is nonincreasing") {
    auto g = shared(generate_path(5));
    const DirichletDomain dom(g, {1, 2, 3});
    const ProblemSpec spec(dom, Exponent(3.0), sigma_one, 1.0, 1.0,
                           zero_reaction, {0.0, 2.0, 0.0});
    IntegrateOptions opts;
    opts.horizon = 2.0;
    const auto [traj, report] = integrate(spec, opts);
    const std::vector<SupSample> sup = sup_trajectory(traj);
    for (std::size_t i = 1; i < sup.size(); ++i)
      CHECK(sup[i].value <= sup[i - 1].value + 1e-12);
  }
}

TEST_SUITE("blow-up bound") {
  TEST_CASE("rational integrand with known antiderivative") {
    // delta f(s) - s^{p-1} = s^2 for f = 2 s^2, p = 3:
    // integral from 1 of ds/s^2 = 1.
    const double F = blowup_bound_F([](double s) { return 2.0 * s * s; }, 1.0,
                                    Exponent(3.0), 1.0);
    CHECK(F == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("matches the blow-up scenario closed form") {
    // f = 1.5 z(s), delta = 1, p = 3: denominator 0.5 s^2, from x = 2: T = 1.
    const double F = blowup_bound_F([](double s) { return 1.5 * z_power(s, 3.0); },
                                    1.0, Exponent(3.0), 2.0);
    CHECK(F == doctest::Approx(1.0).epsilon(1e-8));
  }

  TEST_CASE("quartic case") {
    // p = 4, f = 2 s^3: denominator s^3, from x = 1: integral = 1/2.
    const double F = blowup_bound_F([](double s) { return 2.0 * s * s * s; },
                                    1.0, Exponent(4.0), 1.0);
    CHECK(F == doctest::Approx(0.5).epsilon(1e-8));
  }

  TEST_CASE("scaling in the lower limit") {
    // Same integrand, lower limit doubled: integral of s^-2 halves.
    const double F = blowup_bound_F([](double s) { return 2.0 * s * s; }, 1.0,
                                    Exponent(3.0), 2.0);
    CHECK(F == doctest::Approx(0.5).epsilon(1e-8));
  }

  TEST_CASE("degenerate denominator is rejected") {
    try {
      (void)blowup_bound_F([](double s) { return z_power(s, 3.0); }, 1.0,
                           Exponent(3.0), 1.0);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::nonpositive_denominator);
    }
  }
}

TEST_SUITE("blow-up fit") {
  TEST_CASE("recovers the pole of an exact hyperbola") {
    // sup(t) = 1 / (3 - t), q = 2.
    std::vector<double> times, sups;
    for (int i = 0; i < 40; ++i) {
      const double t = 2.0 + i * 0.02;
      times.push_back(t);
      sups.push_back(1.0 / (3.0 - t));
    }
    const BlowupFit fit = fit_blowup_time(times, sups, 2.0, 1e-9, 1e-12);
    CHECK(fit.t_star == doctest::Approx(3.0).epsilon(1e-3));
    CHECK(fit.fit_residual <= 1e-2);
  }

  TEST_CASE("also works without an exponent hint") {
    std::vector<double> times, sups;
    for (int i = 0; i < 40; ++i) {
      const double t = 2.5 + i * 0.01;
      times.push_back(t);
      sups.push_back(std::pow(3.0 - t, -1.5));
    }
    const BlowupFit fit =
        fit_blowup_time(times, sups, std::nullopt, 1e-9, 1e-12);
    CHECK(fit.t_star == doctest::Approx(3.0).epsilon(1e-2));
  }
}
