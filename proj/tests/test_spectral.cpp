#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "nlfp/entropy.hpp"
#include "nlfp/errors.hpp"
#include "nlfp/spectral.hpp"

using namespace nlfp;
using spectral::OUModel;
using spectral::SpectralCoeffs;

TEST_CASE("normalized Hermite values") {
  CHECK(spectral::hermite_phi(0, 3.7) == 1.0);
  CHECK(spectral::hermite_phi(1, -1.3) == doctest::Approx(-1.3));
  CHECK(spectral::hermite_phi(2, 0.0) == doctest::Approx(-0.70710678).epsilon(1e-8));
}

TEST_CASE("OU model basis is orthonormal under its quadrature") {
  const OUModel model(40);
  CHECK(model.gram_residual() <= 1e-10);
  double wsum = 0.0;
  for (double w : model.weights()) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("projection of exact basis combinations") {
  const OUModel model(16);
  std::vector<double> ones(model.nodes().size(), 1.0);
  const auto c_ones = model.project(ones);
  CHECK(c_ones.c[0] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k = 1; k <= 16; ++k) CHECK(std::fabs(c_ones.c[k]) <= 1e-12);

  std::vector<double> mode1(model.nodes().size());
  for (std::size_t i = 0; i < mode1.size(); ++i) mode1[i] = 1.0 + 0.5 * model.nodes()[i];
  const auto c_mode = model.project(mode1);
  CHECK(c_mode.c[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(c_mode.c[1] == doctest::Approx(0.5).epsilon(1e-12));
  for (std::size_t k = 2; k <= 16; ++k) CHECK(std::fabs(c_mode.c[k]) <= 1e-12);
}

TEST_CASE("projection rejects non-normalized input") {
  const OUModel model(8);
  std::vector<double> v(model.nodes().size(), 1.5);
  CHECK_THROWS_AS(model.project(v), std::invalid_argument);
  std::vector<double> short_v(3, 1.0);
  CHECK_THROWS_AS(model.project(short_v), std::invalid_argument);
}

TEST_CASE("smooth bump reconstructs within 1e-6 at K = 40") {
  const OUModel model(40);
  // indicator-like smooth bump on [-1,1], normalized to unit mass under u_inf
  auto bump = [](double x) {
    return 1.0 / ((1.0 + std::exp(-3.0 * (x + 1.0))) * (1.0 + std::exp(3.0 * (x - 1.0))));
  };
  std::vector<double> v0(model.nodes().size());
  double mass = 0.0;
  for (std::size_t i = 0; i < v0.size(); ++i) {
    v0[i] = bump(model.nodes()[i]);
    mass += model.weights()[i] * v0[i];
  }
  for (double& v : v0) v /= mass;
  const auto coeffs = model.project(v0);
  const auto recon = model.reconstruct(coeffs);
  double err_sq = 0.0;
  for (std::size_t i = 0; i < v0.size(); ++i)
    err_sq += model.weights()[i] * (recon[i] - v0[i]) * (recon[i] - v0[i]);
  CHECK(std::sqrt(err_sq) <= 1e-6);
}

TEST_CASE("classical and backward-Euler evolutions") {
  SpectralCoeffs c;
  c.c = {1.0, 0.5};
  const auto unchanged = spectral::evolve_classical(c, 0.0);
  CHECK(unchanged.c[1] == doctest::Approx(0.5));
  const auto later = spectral::evolve_classical(c, 2.0);
  CHECK(later.c[1] == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-14));
  const auto be = spectral::evolve_backward_euler(c, 0.1, 3);
  CHECK(be.c[1] == doctest::Approx(0.3756574).epsilon(1e-7));
}

TEST_CASE("weighted norm and Parseval consistency with quadrature entropy") {
  SpectralCoeffs trivial;
  trivial.c = {1.0, 0.0, 0.0};
  CHECK(spectral::weighted_norm_sq(trivial) == 0.0);
  SpectralCoeffs single;
  single.c = {1.0, 0.5};
  CHECK(spectral::weighted_norm_sq(single) == doctest::Approx(0.25));

  SpectralCoeffs multi;
  multi.c = {1.0, 0.3, -0.2, 0.1};
  const SpatialGrid grid{8.0, 800};
  const Field1D u = spectral::to_field(multi, grid);
  const auto steady = entropy::SteadyState1D::gibbs(grid, [](double x) { return 0.5 * x * x; });
  const double h =
      entropy::relative_entropy(entropy::EntropyGenerator::power(2.0), u, steady);
  CHECK(h == doctest::Approx(spectral::weighted_norm_sq(multi)).epsilon(1e-8));
}

TEST_CASE("non-local mode evolution: exact equality for single-mode data") {
  const auto kernel = kernels::KernelSpec::fractional(0.5);
  const auto grid = convq::TimeGrid::uniform(0.02, 500);
  const spectral::NonlocalModeEvolution evo(kernel, grid, 1);
  SpectralCoeffs c;
  c.c = {1.0, 0.5};
  for (std::size_t n = 0; n <= grid.steps(); n += 50) {
    const double s1 = evo.relaxation(1, n);
    const auto ct = evo.at(c, n);
    CHECK(spectral::weighted_norm_sq(ct) == doctest::Approx(0.25 * s1 * s1).epsilon(1e-12));
  }
}

TEST_CASE("coefficient magnitudes never grow in time") {
  const auto kernel = kernels::KernelSpec::multi_term({{1.0, 0.3}, {1.0, 0.7}});
  const auto grid = convq::TimeGrid::uniform(0.05, 200);
  const spectral::NonlocalModeEvolution evo(kernel, grid, 4);
  SpectralCoeffs c;
  c.c = {1.0, 0.4, -0.3, 0.2, 0.1};
  std::vector<double> prev = c.c;
  for (std::size_t n = 1; n <= grid.steps(); n += 10) {
    const auto ct = evo.at(c, n);
    for (std::size_t k = 1; k < ct.c.size(); ++k) {
      CHECK(std::fabs(ct.c[k]) <= std::fabs(prev[k]) + 1e-14);
    }
    prev = ct.c;
  }
}

TEST_CASE("lower bound certificate") {
  const auto kernel = kernels::KernelSpec::fractional(0.6);
  const auto grid = convq::TimeGrid::uniform(0.05, 100);
  SpectralCoeffs c;
  c.c = {1.0, 0.5, 0.3};
  const auto bound = spectral::lower_bound_certificate(c, kernel, grid);
  const spectral::NonlocalModeEvolution evo(kernel, grid, 2);
  for (std::size_t n = 0; n <= grid.steps(); n += 10) {
    const double h = spectral::weighted_norm_sq(evo.at(c, n));
    CHECK(bound[n] <= h + 1e-14);
    const double s1 = evo.relaxation(1, n);
    CHECK(bound[n] == doctest::Approx(0.25 * s1 * s1).epsilon(1e-12));
  }

  SpectralCoeffs no_first;
  no_first.c = {1.0, 0.0, 0.3};
  CHECK_THROWS_AS(spectral::lower_bound_certificate(no_first, kernel, grid),
                  certificate_error);

  std::vector<double> times = {0.0, 0.5, 1.0};
  const auto classical = spectral::lower_bound_certificate_classical(c, times);
  CHECK(classical[2] == doctest::Approx(0.25 * std::exp(-2.0)).epsilon(1e-14));
}

TEST_CASE("Bakry-Emery and first eigenvalue coincide: envelope equals certificate") {
  // single-mode data: upper envelope s_1(t)^2 H0 and the lower certificate agree
  const auto kernel = kernels::KernelSpec::fractional(0.5);
  const auto grid = convq::TimeGrid::uniform(0.05, 200);
  SpectralCoeffs c;
  c.c = {1.0, 0.5};
  const auto cert = spectral::lower_bound_certificate(c, kernel, grid);
  const convq::ConvolutionWeights w(kernel, grid);
  const auto s_part_b = convq::solve_relaxation(w, 1.0);  // 2*lambda/beta = 1
  for (std::size_t n = 0; n <= grid.steps(); ++n) {
    const double upper = 0.25 * s_part_b.values[n] * s_part_b.values[n];
    CHECK(cert[n] == doctest::Approx(upper).epsilon(1e-10));
  }
}

TEST_CASE("per-mode CSV export") {
  const auto kernel = kernels::KernelSpec::fractional(0.5);
  const auto grid = convq::TimeGrid::uniform(0.25, 4);
  const spectral::NonlocalModeEvolution evo(kernel, grid, 2);
  SpectralCoeffs c;
  c.c = {1.0, 0.5, 0.25};
  std::ostringstream os;
  evo.write_csv(os, c);
  const std::string csv = os.str();
  CHECK(csv.rfind("t,k,c_k,s_lambda_k\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 5 * 2);
}
