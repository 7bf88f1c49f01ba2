#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "nlfp/convq.hpp"
#include "nlfp/field.hpp"
#include "nlfp/kernels.hpp"

namespace nlfp::spectral {

/// Hermite expansion coefficients of v = u/u_inf; c[0] = 1 for densities.
struct SpectralCoeffs {
  std::vector<double> c;
  std::size_t basis_size() const { return c.empty() ? 0 : c.size() - 1; }
};

/// Ornstein-Uhlenbeck eigenstructure for V(x) = x^2/2 in one dimension:
/// eigenvalues lambda_k = k, eigenfunctions the normalized probabilists'
/// Hermite polynomials, all quadrature against the standard Gaussian.
class OUModel {
 public:
  explicit OUModel(std::size_t basis_size = 40, std::size_t quad_order = 0);

  std::size_t basis_size() const { return K_; }
  double eigenvalue(std::size_t k) const { return (double)k; }

  /// Quadrature nodes in x and weights W with sum W = 1, so that
  /// int f u_inf dx ~= sum W_i f(x_i).
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }

  /// c_k = int v0 phi_k u_inf; throws std::invalid_argument when c_0 strays
  /// from 1 by more than 1e-8 (input not a unit-mass density ratio).
  SpectralCoeffs project(std::span<const double> v0_at_nodes) const;

  /// v(x_i) = sum_k c_k phi_k(x_i) back on the quadrature nodes.
  std::vector<double> reconstruct(const SpectralCoeffs& coeffs) const;

  /// max |<phi_i, phi_j> - delta_ij| over i,j <= basis_size.
  double gram_residual() const;

 private:
  std::size_t K_;
  std::vector<double> nodes_, weights_;
};

/// Normalized probabilists' Hermite polynomial He_k / sqrt(k!).
double hermite_phi(unsigned k, double x);

/// c_k(t) = c_k exp(-k t).
SpectralCoeffs evolve_classical(const SpectralCoeffs& coeffs, double t);

/// c_k(t_n) = c_k (1 + tau k)^{-n}: the exact backward-difference evolution.
SpectralCoeffs evolve_backward_euler(const SpectralCoeffs& coeffs, double tau, std::size_t n);

/// Per-mode relaxation curves s_{lambda_k} solved on one shared grid; the
/// non-local counterpart of the two evolutions above.
class NonlocalModeEvolution {
 public:
  NonlocalModeEvolution(const kernels::KernelSpec& spec, const convq::TimeGrid& grid,
                        std::size_t max_mode);

  const convq::TimeGrid& grid() const { return grid_; }
  std::size_t max_mode() const { return curves_.size(); }
  double relaxation(std::size_t k, std::size_t node) const;
  const convq::RelaxationCurve& curve(std::size_t k) const { return curves_.at(k - 1); }
  SpectralCoeffs at(const SpectralCoeffs& coeffs, std::size_t node) const;

  /// CSV columns: t,k,c_k,s_lambda_k
  void write_csv(std::ostream& os, const SpectralCoeffs& initial) const;

 private:
  convq::TimeGrid grid_;
  std::vector<convq::RelaxationCurve> curves_;  // index k-1
};

/// Parseval: sum_{k>=1} c_k^2 = ||v - 1||^2 in L^2(u_inf), the beta = 2 entropy.
double weighted_norm_sq(const SpectralCoeffs& coeffs);

/// c_1^2 s_{lambda_1}(t_n)^2 per node -- a lower bound for the evolved beta=2
/// entropy. Throws nlfp::certificate_error when c_1 = 0.
std::vector<double> lower_bound_certificate(const SpectralCoeffs& coeffs,
                                            const kernels::KernelSpec& spec,
                                            const convq::TimeGrid& grid);

/// Same certificate for the classical evolution: c_1^2 exp(-2 t_n).
std::vector<double> lower_bound_certificate_classical(const SpectralCoeffs& coeffs,
                                                      std::span<const double> times);

/// Field u = (sum_k c_k phi_k) u_inf on a spatial grid, with the discrete
/// Gibbs normalization of that grid.
Field1D to_field(const SpectralCoeffs& coeffs, const SpatialGrid& grid);

}  // namespace nlfp::spectral
