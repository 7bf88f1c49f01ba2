#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "nlfp/field.hpp"

namespace nlfp::entropy {

/// Admissible generating function: the power family
/// phi_beta(x) = x^beta - 1 - beta(x-1), beta in (1,2], or the logarithmic
/// phi(x) = x(log x - 1) + 1 driving the Boltzmann entropy. Both satisfy
/// phi(1) = 0, phi'' > 0 and (phi''')^2 <= phi'' phi'''' / 2 on (0,inf).
class EntropyGenerator {
 public:
  static EntropyGenerator power(double beta);
  static EntropyGenerator logarithmic();

  bool is_power() const { return is_power_; }
  double beta() const;  // power generators only
  std::string label() const;

  double phi(double x) const;
  double dphi(double x) const;
  double d2phi(double x) const;
  double d3phi(double x) const;
  double d4phi(double x) const;
  double d2phi_at_one() const { return is_power_ ? beta_ * (beta_ - 1.0) : 1.0; }

 private:
  EntropyGenerator(bool is_power, double beta) : is_power_(is_power), beta_(beta) {}
  bool is_power_;
  double beta_;
};

/// Discrete Gibbs state u_inf = M exp(-V) with unit midpoint mass.
struct SteadyState1D {
  SpatialGrid grid;
  std::vector<double> values;
  double normalization = 0.0;  // the constant M

  template <typename Potential>
  static SteadyState1D gibbs(const SpatialGrid& grid, const Potential& V) {
    SteadyState1D s;
    s.grid = grid;
    s.values.resize(grid.n_cells);
    double mass = 0.0;
    for (std::size_t i = 0; i < grid.n_cells; ++i) {
      s.values[i] = std::exp(-V(grid.x(i)));
      mass += s.values[i];
    }
    mass *= grid.h();
    s.normalization = 1.0 / mass;
    for (double& v : s.values) v *= s.normalization;
    return s;
  }
};

double phi_eval(const EntropyGenerator& gen, double x);

/// Trapezoid quadrature of phi(u/u_inf) u_inf. Throws std::invalid_argument on
/// grid mismatch or if the trapezoid mass of u deviates from 1 by more than 1e-8.
double relative_entropy(const EntropyGenerator& gen, const Field1D& u, const SteadyState1D& steady);

/// Csiszar-Kullback-Pinsker bound sqrt(2 H / phi''(1)) on the L1 distance.
double ckp_bound(const EntropyGenerator& gen, double entropy_value);

/// RHS - LHS of the convex Sobolev inequality with central-difference gradient
/// of v = u/u_inf; nonnegative up to discretization error when V'' >= lambda.
double convex_sobolev_residual(const EntropyGenerator& gen, const Field1D& u,
                               const SteadyState1D& steady, double lambda);

/// F(x,y) = phi(x)^{(b-1)/b} phi(y)^{1/b} - (x^{b-1} y + (1-b) x - y + b - 1),
/// nonnegative on [0,inf)^2 and zero on the diagonal.
double pointwise_F(double beta, double x, double y);

struct HolderBound {
  double lhs;
  double rhs;
};

/// lhs = int (h1^{beta-1} h2 - h1) g with h_i = f_i/g;
/// rhs = E(f1|g)^{(beta-1)/beta} E(f2|g)^{1/beta}. Contract: lhs <= rhs.
HolderBound entropy_holder_bound(double beta, const Field1D& f1, const Field1D& f2,
                                 const SteadyState1D& g);

/// Trapezoid helpers shared by the sweeps.
double trapezoid_mass(const Field1D& u);
double l1_distance(const Field1D& u, const SteadyState1D& steady);

}  // namespace nlfp::entropy
