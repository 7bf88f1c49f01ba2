#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "nlfp/entropy.hpp"
#include "nlfp/fpsolver.hpp"
#include "nlfp/quadrature.hpp"
#include "nlfp/spectral.hpp"

using namespace nlfp;
using entropy::EntropyGenerator;

namespace {

entropy::SteadyState1D gaussian_steady(const SpatialGrid& grid) {
  return entropy::SteadyState1D::gibbs(grid, [](double x) { return 0.5 * x * x; });
}

// unit trapezoid-mass density from a Gaussian mixture
Field1D mixture_density(std::mt19937_64& rng, const SpatialGrid& grid) {
  std::uniform_int_distribution<int> n_comp(1, 3);
  std::uniform_real_distribution<double> center(-2.0, 2.0), sigma(0.6, 1.6), weight(0.2, 1.0);
  std::vector<double> u(grid.n_cells, 0.0);
  const int m = n_comp(rng);
  for (int c = 0; c < m; ++c) {
    const double mu = center(rng), sg = sigma(rng), w = weight(rng);
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
      const double z = (grid.x(i) - mu) / sg;
      u[i] += w * std::exp(-0.5 * z * z) / (sg * std::sqrt(2.0 * M_PI));
    }
  }
  Field1D f(grid, std::move(u));
  const double mass = entropy::trapezoid_mass(f);
  for (double& v : f.values) v /= mass;
  return f;
}

}  // namespace

TEST_CASE("generator validation and phi basics") {
  CHECK_THROWS_AS(EntropyGenerator::power(1.0), std::domain_error);
  CHECK_THROWS_AS(EntropyGenerator::power(2.5), std::domain_error);
  const auto p2 = EntropyGenerator::power(2.0);
  const auto log_gen = EntropyGenerator::logarithmic();
  CHECK(entropy::phi_eval(p2, 3.0) == doctest::Approx(4.0));
  CHECK(entropy::phi_eval(EntropyGenerator::power(1.37), 1.0) == doctest::Approx(0.0));
  CHECK(entropy::phi_eval(log_gen, 1.0) == doctest::Approx(0.0));
  CHECK(entropy::phi_eval(log_gen, 0.0) == doctest::Approx(1.0));  // 0 log 0 := 0
  CHECK(entropy::phi_eval(EntropyGenerator::power(1.5), 0.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(entropy::phi_eval(p2, -0.1), std::domain_error);
  CHECK_THROWS_AS(entropy::phi_eval(log_gen, -0.1), std::domain_error);
}

TEST_CASE("phi is nonnegative and vanishes only at one") {
  for (const auto& gen : {EntropyGenerator::power(1.2), EntropyGenerator::power(1.7),
                          EntropyGenerator::power(2.0), EntropyGenerator::logarithmic()}) {
    for (int i = 0; i <= 400; ++i) {
      const double x = 1e-3 * std::pow(4e3, i / 400.0);
      const double v = gen.phi(x);
      CHECK(v >= 0.0);
      if (std::fabs(x - 1.0) > 1e-3) CHECK(v > 0.0);
    }
  }
}

TEST_CASE("phi series window is consistent with the direct formula") {
  // values straddling the |x-1| = 1e-4 switch against long-double evaluation
  for (const double beta : {1.3, 1.6}) {
    const auto gen = EntropyGenerator::power(beta);
    for (const double e : {2e-4, 1.2e-4, 9e-5, 5e-5}) {
      const long double x = 1.0L + (long double)e;
      const long double exact =
          std::pow(x, (long double)beta) - 1.0L - (long double)beta * (long double)e;
      CHECK(gen.phi((double)x) == doctest::Approx((double)exact).epsilon(1e-8));
    }
  }
  const auto lg = EntropyGenerator::logarithmic();
  for (const double e : {2e-4, 9e-5}) {
    const long double x = 1.0L + (long double)e;
    const long double exact = x * (std::log(x) - 1.0L) + 1.0L;
    CHECK(lg.phi((double)x) == doctest::Approx((double)exact).epsilon(1e-8));
  }
}

TEST_CASE("admissibility: (phi''')^2 <= phi'' phi'''' / 2") {
  for (const auto& gen : {EntropyGenerator::power(1.2), EntropyGenerator::power(1.5),
                          EntropyGenerator::power(2.0), EntropyGenerator::logarithmic()}) {
    for (int i = 0; i < 10000; ++i) {
      const double x = 1e-3 * std::pow(1e6, i / 9999.0);
      const double d3 = gen.d3phi(x);
      const double rhs = 0.5 * gen.d2phi(x) * gen.d4phi(x);
      CHECK(d3 * d3 <= rhs * (1.0 + 1e-12) + 1e-300);
    }
  }
}

TEST_CASE("beta -> 1 limit of phi_beta/(beta-1) is the logarithmic phi") {
  const auto lg = EntropyGenerator::logarithmic();
  for (double x : {0.5, 2.0}) {
    const double beta = 1.0 + 1e-5;
    const double limit = EntropyGenerator::power(beta).phi(x) / (beta - 1.0);
    CHECK(limit == doctest::Approx(lg.phi(x)).epsilon(1e-3));
  }
}

TEST_CASE("relative entropy: zero at the steady state, positive elsewhere") {
  const SpatialGrid grid{8.0, 400};
  const auto steady = gaussian_steady(grid);
  Field1D u(grid, steady.values);
  for (const auto& gen : {EntropyGenerator::power(2.0), EntropyGenerator::logarithmic()}) {
    CHECK(entropy::relative_entropy(gen, u, steady) == doctest::Approx(0.0));
  }
  std::mt19937_64 rng(5);
  const Field1D f = mixture_density(rng, grid);
  CHECK(entropy::relative_entropy(EntropyGenerator::power(1.5), f, steady) > 0.0);
}

TEST_CASE("relative entropy rejects bad inputs") {
  const SpatialGrid grid{8.0, 400};
  const auto steady = gaussian_steady(grid);
  Field1D wrong_grid(SpatialGrid{8.0, 200}, std::vector<double>(200, 1.0 / 16.0));
  CHECK_THROWS_AS(entropy::relative_entropy(EntropyGenerator::power(2.0), wrong_grid, steady),
                  std::invalid_argument);
  Field1D bad_mass(grid, std::vector<double>(400, 1.0));
  CHECK_THROWS_AS(entropy::relative_entropy(EntropyGenerator::power(2.0), bad_mass, steady),
                  std::invalid_argument);
}

TEST_CASE("single-mode quadratic entropy equals the Parseval value 1/4") {
  const SpatialGrid grid{8.0, 800};
  const auto steady = gaussian_steady(grid);
  std::vector<double> u(grid.n_cells);
  for (std::size_t i = 0; i < grid.n_cells; ++i)
    u[i] = (1.0 + 0.5 * grid.x(i)) * steady.values[i];
  const double h =
      entropy::relative_entropy(EntropyGenerator::power(2.0), Field1D(grid, u), steady);
  CHECK(h == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("ckp_bound closed forms") {
  CHECK(entropy::ckp_bound(EntropyGenerator::power(2.0), 0.25) == doctest::Approx(0.5));
  CHECK(entropy::ckp_bound(EntropyGenerator::power(1.5), 1.0) ==
        doctest::Approx(1.6330).epsilon(1e-4));
  CHECK(entropy::ckp_bound(EntropyGenerator::logarithmic(), 0.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(entropy::ckp_bound(EntropyGenerator::power(2.0), -1.0), std::domain_error);
}

TEST_CASE("CKP inequality over random density pairs") {
  const SpatialGrid grid{8.0, 256};
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    const Field1D f = mixture_density(rng, grid);
    const Field1D g = mixture_density(rng, grid);
    const entropy::SteadyState1D gs{grid, g.values, 1.0};
    const double l1 = entropy::l1_distance(f, gs);
    for (const auto& gen : {EntropyGenerator::power(1.25), EntropyGenerator::power(2.0),
                            EntropyGenerator::logarithmic()}) {
      const double bound = entropy::ckp_bound(gen, entropy::relative_entropy(gen, f, gs));
      CHECK(l1 <= bound + 1e-8);
    }
  }
}

TEST_CASE("convex Sobolev residual: equilibrium, saturation, and random data") {
  const SpatialGrid grid{8.0, 400};
  const auto steady = gaussian_steady(grid);

  Field1D eq(grid, steady.values);
  CHECK(entropy::convex_sobolev_residual(EntropyGenerator::power(2.0), eq, steady, 1.0) ==
        doctest::Approx(0.0));

  // u = (1 + 0.3 phi_1) u_inf saturates the Poincare inequality
  std::vector<double> u(grid.n_cells);
  for (std::size_t i = 0; i < grid.n_cells; ++i)
    u[i] = (1.0 + 0.3 * grid.x(i)) * steady.values[i];
  const double sat = entropy::convex_sobolev_residual(EntropyGenerator::power(2.0),
                                                      Field1D(grid, u), steady, 1.0);
  CHECK(std::fabs(sat) <= 1e-4);

  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> eps_dist(0.05, 0.5);
  for (int i = 0; i < 50; ++i) {
    const Field1D mix = mixture_density(rng, grid);
    const double eps = eps_dist(rng);
    std::vector<double> blend(grid.n_cells);
    for (std::size_t j = 0; j < grid.n_cells; ++j)
      blend[j] = (1.0 - eps) * steady.values[j] + eps * mix.values[j];
    for (const auto& gen : {EntropyGenerator::power(1.5), EntropyGenerator::power(2.0),
                            EntropyGenerator::logarithmic()}) {
      CHECK(entropy::convex_sobolev_residual(gen, Field1D(grid, blend), steady, 1.0) >= -1e-6);
    }
  }
}

TEST_CASE("pointwise_F closed forms and diagonal") {
  for (double c : {0.0, 0.3, 1.0, 2.5, 7.0})
    CHECK(std::fabs(entropy::pointwise_F(1.7, c, c)) <= 1e-12);
  // beta = 2: |x-1||y-1| - (x-1)(y-1)
  CHECK(entropy::pointwise_F(2.0, 3.0, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(entropy::pointwise_F(1.5, 0.2, 4.0) > 0.0);
}

TEST_CASE("pointwise_F sweep stays nonnegative") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> coord(1e-12, 10.0), beta(1.0 + 1e-12, 2.0);
  double min_f = 1e30;
  for (int i = 0; i < 100000; ++i)
    min_f = std::min(min_f, entropy::pointwise_F(beta(rng), coord(rng), coord(rng)));
  CHECK(min_f >= -1e-12);
}

TEST_CASE("auxiliary g function changes sign only at one") {
  // g(y) = (b-1) y^{b-2} + (2-b) y^{b-1} - 1
  for (double b : {1.2, 1.5, 1.9}) {
    auto g = [b](double y) {
      return (b - 1.0) * std::pow(y, b - 2.0) + (2.0 - b) * std::pow(y, b - 1.0) - 1.0;
    };
    CHECK(g(1.0) == doctest::Approx(0.0));
    for (double y : {0.05, 0.3, 0.7, 0.95}) CHECK(g(y) < 0.0);
    for (double y : {1.05, 2.0, 10.0, 100.0}) CHECK(g(y) > 0.0);
  }
}

TEST_CASE("Holder entropy bound: equality and inequality") {
  const SpatialGrid grid{8.0, 256};
  std::mt19937_64 rng(31);
  const auto steady = gaussian_steady(grid);

  Field1D g_as_field(grid, steady.values);
  const auto zero = entropy::entropy_holder_bound(1.5, g_as_field, g_as_field, steady);
  CHECK(zero.lhs == doctest::Approx(0.0));
  CHECK(zero.rhs == doctest::Approx(0.0));

  std::uniform_real_distribution<double> beta_dist(1.0 + 1e-6, 2.0);
  for (int i = 0; i < 200; ++i) {
    const Field1D f1 = mixture_density(rng, grid);
    const Field1D f2 = mixture_density(rng, grid);
    const Field1D g = mixture_density(rng, grid);
    const entropy::SteadyState1D gs{grid, g.values, 1.0};
    const double beta = beta_dist(rng);
    const auto hb = entropy::entropy_holder_bound(beta, f1, f2, gs);
    CHECK(hb.lhs <= hb.rhs + 1e-10);
    const auto eq = entropy::entropy_holder_bound(beta, f1, f1, gs);
    CHECK(eq.lhs == doctest::Approx(eq.rhs).epsilon(1e-10));
  }
}

TEST_CASE("weighted-power-mean monotonicity in beta") {
  // beta -> (int (u0/uinf)^beta uinf)^{1/beta} is nondecreasing
  const SpatialGrid grid{8.0, 256};
  const auto steady = gaussian_steady(grid);
  std::mt19937_64 rng(47);
  const Field1D f = mixture_density(rng, grid);
  double prev = 0.0;
  for (double beta : {1.1, 1.3, 1.5, 1.7, 1.9, 2.0}) {
    std::vector<double> integrand(grid.n_cells);
    for (std::size_t i = 0; i < grid.n_cells; ++i)
      integrand[i] = std::pow(f.values[i] / steady.values[i], beta) * steady.values[i];
    double sum = 0.0;
    for (double v : integrand) sum += v;
    sum -= 0.5 * (integrand.front() + integrand.back());
    const double mean = std::pow(sum * grid.h(), 1.0 / beta);
    CHECK(mean >= prev - 1e-12);
    prev = mean;
  }
}
