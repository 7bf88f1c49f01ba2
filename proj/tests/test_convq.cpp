#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <vector>

#include "nlfp/convq.hpp"
#include "nlfp/errors.hpp"
#include "nlfp/fpsolver.hpp"
#include "nlfp/kernels.hpp"
#include "nlfp/specfun.hpp"

using namespace nlfp;
using convq::ConvolutionWeights;
using convq::TimeGrid;
using kernels::KernelSpec;

TEST_CASE("TimeGrid construction and validation") {
  const auto u = TimeGrid::uniform(0.1, 10);
  CHECK(u.steps() == 10);
  CHECK(u.node(0) == 0.0);
  CHECK(u.t_max() == doctest::Approx(1.0));
  CHECK(u.is_uniform());
  const auto g = TimeGrid::geometric(0.1, 1.5, 8);
  CHECK_FALSE(g.is_uniform());
  for (std::size_t n = 1; n <= g.steps(); ++n) CHECK(g.node(n) > g.node(n - 1));
  CHECK(g.step(3) == doctest::Approx(0.1 * 1.5 * 1.5));
  CHECK_THROWS_AS(TimeGrid::uniform(0.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::geometric(0.1, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::geometric(0.1, 1.5, 0), std::invalid_argument);
}

TEST_CASE("discrete complementary weights: defining property") {
  const ConvolutionWeights w(KernelSpec::fractional(0.5), TimeGrid::uniform(0.1, 120));
  for (double lw : w.l_weights()) CHECK(lw >= 0.0);
  CHECK(w.complementarity_residual() <= 1e-12);
}

TEST_CASE("discrete complementary weights on a geometric grid") {
  for (const auto& spec :
       {KernelSpec::fractional(0.3), KernelSpec::tempered_fractional(0.5, 1.0),
        KernelSpec::multi_term({{1.0, 0.3}, {1.0, 0.7}}), KernelSpec::distributed_order()}) {
    const ConvolutionWeights w(spec, TimeGrid::geometric(0.05, 1.2, 40));
    for (double lw : w.l_weights()) CHECK(lw >= 0.0);
    CHECK(w.complementarity_residual() <= 1e-10);
  }
}

TEST_CASE("cumulative l converges to g_{1+alpha} at first order") {
  const double alpha = 0.5;
  const auto spec = KernelSpec::fractional(alpha);
  const double target = spec.eval_cum_l(2.0);
  auto cum_error = [&](std::size_t steps) {
    const ConvolutionWeights w(spec, TimeGrid::uniform(2.0 / (double)steps, steps));
    return std::fabs(w.cumulative_l(steps) - target);
  };
  const double coarse = cum_error(250);
  const double fine = cum_error(500);
  CHECK(fine < 0.7 * coarse + 1e-12);
  CHECK(coarse < 0.05);
}

TEST_CASE("multi-term cumulative l behaves like g_{1+min alpha} at large times") {
  const auto spec = KernelSpec::multi_term({{1.0, 0.3}, {1.0, 0.7}});
  // geometric grid out to ~1e4
  const ConvolutionWeights w(spec, TimeGrid::geometric(0.01, 1.05, 285));
  const double t_end = w.grid().t_max();
  CHECK(t_end > 8e3);
  const double expected = specfun::g_beta(1.3, t_end);
  CHECK(w.cumulative_l(w.grid().steps()) == doctest::Approx(expected).epsilon(0.10));
}

TEST_CASE("relaxation: mu = 0 stays at one") {
  const ConvolutionWeights w(KernelSpec::fractional(0.4), TimeGrid::uniform(0.05, 60));
  const auto curve = convq::solve_relaxation(w, 0.0);
  for (double v : curve.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("relaxation matches Mittag-Leffler and the smubounds interval") {
  const ConvolutionWeights w(KernelSpec::fractional(0.5), TimeGrid::uniform(0.005, 2000));
  const auto curve = convq::solve_relaxation(w, 1.0);
  const std::size_t node_t1 = 200;  // t = 1
  CHECK(curve.times[node_t1] == doctest::Approx(1.0));
  CHECK(curve.values[node_t1] ==
        doctest::Approx(specfun::mittag_leffler(0.5, -1.0)).epsilon(2.5e-3));
  // interval endpoints 1/(1+Gamma(1/2)) and 1/(1+1/Gamma(3/2))
  CHECK(curve.values[node_t1] >= 0.36067);
  CHECK(curve.values[node_t1] <= 0.46985);
}

TEST_CASE("relaxation curve invariants") {
  for (const auto& spec :
       {KernelSpec::fractional(0.5), KernelSpec::multi_term({{1.0, 0.3}, {1.0, 0.7}}),
        KernelSpec::distributed_order(), KernelSpec::tempered_fractional(0.5, 1.0)}) {
    for (const bool geometric : {false, true}) {
      const TimeGrid grid =
          geometric ? TimeGrid::geometric(0.02, 1.1, 80) : TimeGrid::uniform(0.05, 150);
      const ConvolutionWeights w(spec, grid);
      const auto curve = convq::solve_relaxation(w, 1.5);
      CHECK(curve.values[0] == 1.0);
      for (std::size_t n = 1; n <= grid.steps(); ++n) {
        CHECK(curve.values[n] <= curve.values[n - 1] + 1e-12);
        CHECK(curve.values[n] >= 0.0);
        CHECK(curve.values[n] <= 1.0);
        CHECK(curve.values[n] >= curve.lower_env[n] - 1e-10);
        CHECK(curve.values[n] <= curve.upper_env[n] + 1e-10);
      }
    }
  }
}

TEST_CASE("relaxation is nonincreasing in mu") {
  const ConvolutionWeights w(KernelSpec::fractional(0.6), TimeGrid::uniform(0.02, 300));
  const auto lo = convq::solve_relaxation(w, 0.5);
  const auto hi = convq::solve_relaxation(w, 2.0);
  for (std::size_t n = 0; n < lo.values.size(); ++n)
    CHECK(hi.values[n] <= lo.values[n] + 1e-14);
}

TEST_CASE("relaxation decays below 0.05 for every kernel class") {
  // horizon chosen per decay class; the tempered kernel underflows on the
  // ultraslow horizon, the distributed-order kernel needs it
  const std::vector<std::pair<KernelSpec, TimeGrid>> cases = {
      {KernelSpec::fractional(0.5), TimeGrid::geometric(0.01, 1.06, 270)},
      {KernelSpec::multi_term({{1.0, 0.3}, {1.0, 0.7}}), TimeGrid::geometric(0.01, 1.06, 290)},
      {KernelSpec::tempered_fractional(0.5, 1.0), TimeGrid::uniform(0.05, 1000)},
      {KernelSpec::distributed_order(), TimeGrid::geometric(0.01, 1.06, 460)}};
  for (const auto& [spec, grid] : cases) {
    const ConvolutionWeights w(spec, grid);
    const auto curve = convq::solve_relaxation(w, 2.0);
    CHECK(curve.values.back() < 0.05);
  }
}

TEST_CASE("fractional tail slope equals -alpha") {
  const auto spec = KernelSpec::fractional(0.4);
  const TimeGrid grid = TimeGrid::geometric(0.01, 1.03, 420);  // reaches past 1e3
  const ConvolutionWeights w(spec, grid);
  const auto curve = convq::solve_relaxation(w, 2.0);
  const auto fit =
      fpsolver::fit_decay_rate(curve.times, curve.values, spec.decay_class(), 10.0, 1000.0);
  CHECK(fit.rate == doctest::Approx(-0.4).epsilon(0.125));  // -0.4 +- 0.05
  CHECK(fit.r_squared > 0.99);
}

TEST_CASE("comparison principle surrogate in the discrete calculus") {
  // data obeying  d/dt(k*[P - P0])_n + mu P_n <= 0  stays below s_mu P0
  const auto spec = KernelSpec::fractional(0.5);
  const TimeGrid grid = TimeGrid::uniform(0.02, 200);
  const ConvolutionWeights w(spec, grid);
  const double mu = 1.2;
  const auto s = convq::solve_relaxation(w, mu);

  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> forcing(0.0, 0.5);
  const double p0 = 2.0;
  std::vector<double> p(grid.steps() + 1, p0);
  double phi_prev = 0.0;
  for (std::size_t n = 1; n <= grid.steps(); ++n) {
    const double h = grid.step(n);
    const double lead = w.k_weight(n, n);
    double memory = 0.0;
    for (std::size_t j = 1; j < n; ++j) memory += w.k_weight(n, j) * (p[j] - p0);
    const double r = forcing(rng);
    p[n] = (lead * p0 + phi_prev - memory - h * r) / (lead + mu * h);
    phi_prev = lead * (p[n] - p0) + memory;
    CHECK(p[n] <= s.values[n] * p0 + 1e-12);
  }
}

TEST_CASE("apply_nonlocal_derivative basics") {
  const ConvolutionWeights w(KernelSpec::fractional(0.5), TimeGrid::uniform(0.1, 50));
  std::vector<double> constant(20, 3.7);
  CHECK(convq::apply_nonlocal_derivative(w, constant, 3.7) == doctest::Approx(0.0));

  // history == 1, baseline == 0: the derivative is the mean of k on the last step
  const auto& spec = w.kernel();
  std::vector<double> ones(12, 1.0);
  const double expected =
      spec.integrated_k(w.grid().node(11), w.grid().node(12)) / w.grid().step(12);
  CHECK(convq::apply_nonlocal_derivative(w, ones, 0.0) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("apply_nonlocal_derivative is linear") {
  const ConvolutionWeights w(KernelSpec::multi_term({{1.0, 0.3}, {1.0, 0.7}}),
                             TimeGrid::uniform(0.07, 40));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  std::vector<double> h1(25), h2(25), combo(25);
  for (std::size_t i = 0; i < 25; ++i) {
    h1[i] = val(rng);
    h2[i] = val(rng);
  }
  const double a = 1.3, b = -0.6, c1 = 0.4, c2 = -1.1;
  for (std::size_t i = 0; i < 25; ++i) combo[i] = a * h1[i] + b * h2[i];
  const double lhs = convq::apply_nonlocal_derivative(w, combo, a * c1 + b * c2);
  const double rhs = a * convq::apply_nonlocal_derivative(w, h1, c1) +
                     b * convq::apply_nonlocal_derivative(w, h2, c2);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
}

TEST_CASE("discrete fundamental identity is exact") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> val(0.1, 3.0);
  std::vector<double> u(100);
  for (double& v : u) v = val(rng);
  CHECK(convq::check_fundamental_identity_discrete(u, 0.1, convq::power_convex(2.0)) <= 1e-12);
  CHECK(convq::check_fundamental_identity_discrete(u, 0.1, convq::power_convex(1.5)) <= 1e-12);
  std::vector<double> constant(50, 1.7);
  CHECK(convq::check_fundamental_identity_discrete(constant, 0.1, convq::power_convex(2.0)) ==
        doctest::Approx(0.0));
}

TEST_CASE("discrete convexity inequality") {
  const ConvolutionWeights w(KernelSpec::fractional(0.5), TimeGrid::uniform(0.05, 120));
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> val(0.1, 4.0);
  std::vector<double> u(100);
  for (double& v : u) v = val(rng);

  // affine psi: equality up to rounding
  const double affine = convq::check_convexity_inequality(w, u, 0.8, convq::power_convex(1.0));
  CHECK(std::fabs(affine) <= 1e-12);

  // convex psi: nonnegative margin
  CHECK(convq::check_convexity_inequality(w, u, 0.8, convq::power_convex(2.0)) >= -1e-12);
  CHECK(convq::check_convexity_inequality(w, u, 0.8, convq::power_convex(1.5)) >= -1e-12);

  std::vector<double> constant(60, 0.8);
  const double const_margin =
      convq::check_convexity_inequality(w, constant, 0.8, convq::power_convex(2.0));
  CHECK(std::fabs(const_margin) <= 1e-13);
}

TEST_CASE("relaxation CSV export shape") {
  const ConvolutionWeights w(KernelSpec::fractional(0.5), TimeGrid::uniform(0.5, 4));
  const auto curve = convq::solve_relaxation(w, 1.0);
  std::ostringstream os;
  curve.write_csv(os);
  const std::string csv = os.str();
  CHECK(csv.rfind("t,s_mu,lower_env,upper_env\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);  // header + 5 nodes
}
