#include "nlfp/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "nlfp/errors.hpp"
#include "nlfp/quadrature.hpp"

namespace nlfp::spectral {

double hermite_phi(unsigned k, double x) {
  // normalized three-term recurrence: phi_{k+1} = (x phi_k - sqrt(k) phi_{k-1}) / sqrt(k+1)
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = x;
  for (unsigned j = 1; j < k; ++j) {
    const double next = (x * cur - std::sqrt((double)j) * prev) / std::sqrt((double)j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

OUModel::OUModel(std::size_t basis_size, std::size_t quad_order) : K_(basis_size) {
  if (K_ == 0) throw std::invalid_argument("OUModel: basis size must be positive");
  const std::size_t q = quad_order ? quad_order : 2 * K_ + 8;
  if (q < 2 * K_) throw std::invalid_argument("OUModel: quadrature order must be >= 2K");
  const quad::Rule gh = quad::gauss_hermite(q);
  nodes_.resize(q);
  weights_.resize(q);
  const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);
  for (std::size_t i = 0; i < q; ++i) {
    nodes_[i] = std::sqrt(2.0) * gh.nodes[i];  // Gaussian weight e^{-x^2/2}/sqrt(2 pi)
    weights_[i] = gh.weights[i] * inv_sqrt_pi;
  }
}

SpectralCoeffs OUModel::project(std::span<const double> v0_at_nodes) const {
  if (v0_at_nodes.size() != nodes_.size())
    throw std::invalid_argument("OUModel::project: sample count must match quadrature order");
  SpectralCoeffs out;
  out.c.assign(K_ + 1, 0.0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double wv = weights_[i] * v0_at_nodes[i];
    // run the Hermite recurrence once per node, all modes in one pass
    double prev = 1.0, cur = nodes_[i];
    out.c[0] += wv;
    if (K_ >= 1) out.c[1] += wv * cur;
    for (std::size_t k = 2; k <= K_; ++k) {
      const double next =
          (nodes_[i] * cur - std::sqrt((double)k - 1.0) * prev) / std::sqrt((double)k);
      prev = cur;
      cur = next;
      out.c[k] += wv * cur;
    }
  }
  if (std::fabs(out.c[0] - 1.0) > 1e-8)
    throw std::invalid_argument("OUModel::project: input is not a unit-mass density ratio");
  return out;
}

std::vector<double> OUModel::reconstruct(const SpectralCoeffs& coeffs) const {
  std::vector<double> v(nodes_.size(), 0.0);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    double prev = 1.0, cur = nodes_[i];
    double acc = coeffs.c[0];
    if (coeffs.c.size() > 1) acc += coeffs.c[1] * cur;
    for (std::size_t k = 2; k < coeffs.c.size(); ++k) {
      const double next =
          (nodes_[i] * cur - std::sqrt((double)k - 1.0) * prev) / std::sqrt((double)k);
      prev = cur;
      cur = next;
      acc += coeffs.c[k] * cur;
    }
    v[i] = acc;
  }
  return v;
}

double OUModel::gram_residual() const {
  double worst = 0.0;
  std::vector<double> phi_i(nodes_.size()), phi_j(nodes_.size());
  for (std::size_t a = 0; a <= K_; ++a) {
    for (std::size_t b = a; b <= K_; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < nodes_.size(); ++i)
        acc += weights_[i] * hermite_phi(a, nodes_[i]) * hermite_phi(b, nodes_[i]);
      const double target = (a == b) ? 1.0 : 0.0;
      worst = std::max(worst, std::fabs(acc - target));
    }
  }
  return worst;
}

SpectralCoeffs evolve_classical(const SpectralCoeffs& coeffs, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("evolve_classical: t must be nonnegative");
  SpectralCoeffs out = coeffs;
  for (std::size_t k = 1; k < out.c.size(); ++k) out.c[k] *= std::exp(-(double)k * t);
  return out;
}

SpectralCoeffs evolve_backward_euler(const SpectralCoeffs& coeffs, double tau, std::size_t n) {
  if (!(tau > 0.0)) throw std::invalid_argument("evolve_backward_euler: tau must be positive");
  SpectralCoeffs out = coeffs;
  for (std::size_t k = 1; k < out.c.size(); ++k)
    out.c[k] *= std::pow(1.0 / (1.0 + tau * (double)k), (double)n);
  return out;
}

NonlocalModeEvolution::NonlocalModeEvolution(const kernels::KernelSpec& spec,
                                             const convq::TimeGrid& grid, std::size_t max_mode)
    : grid_(grid) {
  if (max_mode == 0) throw std::invalid_argument("NonlocalModeEvolution: need at least one mode");
  const convq::ConvolutionWeights weights(spec, grid);
  curves_.reserve(max_mode);
  for (std::size_t k = 1; k <= max_mode; ++k)
    curves_.push_back(convq::solve_relaxation(weights, (double)k));
}

double NonlocalModeEvolution::relaxation(std::size_t k, std::size_t node) const {
  if (k == 0) return 1.0;  // lambda_0 = 0: constant mode never decays
  return curves_.at(k - 1).values.at(node);
}

SpectralCoeffs NonlocalModeEvolution::at(const SpectralCoeffs& coeffs, std::size_t node) const {
  if (coeffs.basis_size() > curves_.size())
    throw std::invalid_argument("NonlocalModeEvolution: more modes than solved curves");
  SpectralCoeffs out = coeffs;
  for (std::size_t k = 1; k < out.c.size(); ++k) out.c[k] *= relaxation(k, node);
  return out;
}

void NonlocalModeEvolution::write_csv(std::ostream& os, const SpectralCoeffs& initial) const {
  os << "t,k,c_k,s_lambda_k\n";
  char buf[128];
  for (std::size_t n = 0; n < grid_.nodes().size(); ++n) {
    for (std::size_t k = 1; k <= std::min(initial.basis_size(), curves_.size()); ++k) {
      const double s = relaxation(k, n);
      std::snprintf(buf, sizeof(buf), "%.17g,%zu,%.17g,%.17g\n", grid_.node(n), k,
                    initial.c[k] * s, s);
      os << buf;
    }
  }
}

double weighted_norm_sq(const SpectralCoeffs& coeffs) {
  double acc = 0.0;
  for (std::size_t k = 1; k < coeffs.c.size(); ++k) acc += coeffs.c[k] * coeffs.c[k];
  return acc;
}

namespace {

void require_first_mode(const SpectralCoeffs& coeffs) {
  if (coeffs.c.size() < 2 || coeffs.c[1] == 0.0)
    throw certificate_error("lower_bound_certificate: c_1 vanishes, no certificate");
}

}  // namespace

std::vector<double> lower_bound_certificate(const SpectralCoeffs& coeffs,
                                            const kernels::KernelSpec& spec,
                                            const convq::TimeGrid& grid) {
  require_first_mode(coeffs);
  const convq::ConvolutionWeights weights(spec, grid);
  const convq::RelaxationCurve s1 = convq::solve_relaxation(weights, 1.0);
  std::vector<double> out(s1.values.size());
  const double c1sq = coeffs.c[1] * coeffs.c[1];
  for (std::size_t n = 0; n < out.size(); ++n) out[n] = c1sq * s1.values[n] * s1.values[n];
  return out;
}

std::vector<double> lower_bound_certificate_classical(const SpectralCoeffs& coeffs,
                                                      std::span<const double> times) {
  require_first_mode(coeffs);
  std::vector<double> out(times.size());
  const double c1sq = coeffs.c[1] * coeffs.c[1];
  for (std::size_t n = 0; n < times.size(); ++n) out[n] = c1sq * std::exp(-2.0 * times[n]);
  return out;
}

Field1D to_field(const SpectralCoeffs& coeffs, const SpatialGrid& grid) {
  // discrete Gibbs normalization so the result is a unit-mass field
  std::vector<double> ginf(grid.n_cells);
  double mass = 0.0;
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    ginf[i] = std::exp(-0.5 * grid.x(i) * grid.x(i));
    mass += ginf[i];
  }
  mass *= grid.h();
  std::vector<double> u(grid.n_cells);
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    double v = 0.0;
    for (std::size_t k = 0; k < coeffs.c.size(); ++k)
      if (coeffs.c[k] != 0.0) v += coeffs.c[k] * hermite_phi((unsigned)k, grid.x(i));
    u[i] = v * ginf[i] / mass;
  }
  return Field1D(grid, std::move(u));
}

}  // namespace nlfp::spectral
