#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "nlfp/kernels.hpp"

namespace nlfp::convq {

/// Time grid with t_0 = 0; uniform or geometrically stretched steps.
class TimeGrid {
 public:
  static TimeGrid uniform(double step, std::size_t steps);
  static TimeGrid geometric(double first_step, double ratio, std::size_t steps);

  const std::vector<double>& nodes() const { return nodes_; }
  std::size_t steps() const { return nodes_.size() - 1; }
  double node(std::size_t n) const { return nodes_[n]; }
  double step(std::size_t n) const { return nodes_[n] - nodes_[n - 1]; }
  double t_max() const { return nodes_.back(); }
  bool is_uniform() const { return uniform_; }

 private:
  TimeGrid(std::vector<double> nodes, bool uniform)
      : nodes_(std::move(nodes)), uniform_(uniform) {}
  std::vector<double> nodes_;
  bool uniform_;
};

struct ConvexFunction {
  std::function<double(double)> value;
  std::function<double(double)> derivative;
};

/// psi(y) = y^p with its derivative; convex on [0,inf) for p >= 1.
ConvexFunction power_convex(double p);

/// Product-integration weights for d/dt (k * .) together with the discrete
/// complementary kernel.
///
/// K(n,j) = int_{t_n - t_j}^{t_n - t_{j-1}} k(s) ds is exact per interval, so
/// (k*w)(t_n) = sum_j K(n,j) w_j for piecewise-constant w, and the operator is
/// the backward difference of that convolution. The discrete complementary
/// densities gamma_j solve sum_{j<=n} gamma_j K(n,j) = 1 for every n, the grid
/// rendering of k*l == 1; l_weights stores gamma_j h_j so its cumulative sum
/// plays the role of (1*l).
class ConvolutionWeights {
 public:
  ConvolutionWeights(const kernels::KernelSpec& spec, TimeGrid grid);

  const TimeGrid& grid() const { return grid_; }
  const kernels::KernelSpec& kernel() const { return spec_; }

  /// K(n,j), 1 <= j <= n <= steps().
  double k_weight(std::size_t n, std::size_t j) const;

  /// Uniform grids: kappa_m = K(n, n-m) indexed by the lag m.
  /// Nonuniform grids: packed lower-triangular rows.
  const std::vector<double>& k_weights() const { return kappa_; }

  /// Per-interval integrals of the discrete complementary kernel, all >= 0.
  const std::vector<double>& l_weights() const { return l_weights_; }

  /// sum_{j<=n} l_weights[j] -- the discrete (1*l)(t_n).
  double cumulative_l(std::size_t n) const;

  /// Row sum sum_{j<=n} K(n,j) = int_0^{t_n} k, the quantity the certified
  /// upper relaxation envelope is built from.
  double row_sum(std::size_t n) const { return row_sums_[n]; }

  /// max_n |sum_j (l_weights[j]/h_j) K(n,j) - 1| over all rows.
  double complementarity_residual() const;

 private:
  kernels::KernelSpec spec_;
  TimeGrid grid_;
  std::vector<double> kappa_;      // uniform: lag-indexed; nonuniform: packed rows
  std::vector<double> l_weights_;  // gamma_j * h_j
  std::vector<double> row_sums_;   // index 0 unused
};

/// Sampled relaxation function with certified two-sided envelopes.
/// values[0] = 1; for n >= 1 the discrete solution provably satisfies
///   1/(1 + mu / k(t_n))            <=  s_n   (k nonincreasing)
///   s_n  <=  1/(1 + mu t_n / int_0^{t_n} k)  (s nonincreasing, weights exact)
/// in exact arithmetic on any grid, so a violation beyond rounding slack
/// signals a defective weight construction.
struct RelaxationCurve {
  double mu = 0.0;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> lower_env;
  std::vector<double> upper_env;

  /// CSV columns: t,s_mu,lower_env,upper_env
  void write_csv(std::ostream& os) const;
};

/// Implicit marching on d/dt (k*[s-1]) + mu s = 0, s(0) = 1.
/// Throws nlfp::envelope_violation if a computed node leaves its envelope by
/// more than 1e-10.
RelaxationCurve solve_relaxation(const ConvolutionWeights& weights, double mu);

/// Discrete d/dt (k*[v - v0]) at node n = history.size(); history[i-1] is the
/// value on (t_{i-1}, t_i].
double apply_nonlocal_derivative(const ConvolutionWeights& weights,
                                 std::span<const double> history, double baseline);

/// Max absolute residual of the backward-difference fundamental identity
///   psi'(u_n) D u_n = D psi(u)_n + (1/tau)(psi(u_{n-1}) - psi(u_n) - psi'(u_n)(u_{n-1}-u_n))
/// over the sequence; exact algebra, so the residual is rounding noise.
double check_fundamental_identity_discrete(std::span<const double> values, double step,
                                           const ConvexFunction& psi);

/// Most negative margin of psi'(u_n) d/dt(k*[u-u0])_n - d/dt(k*[psi(u)-psi(u0)])_n
/// over all nodes; nonnegative (up to rounding) for convex psi.
double check_convexity_inequality(const ConvolutionWeights& weights,
                                  std::span<const double> values, double baseline,
                                  const ConvexFunction& psi);

}  // namespace nlfp::convq
