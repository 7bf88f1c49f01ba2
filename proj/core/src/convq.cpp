#include "nlfp/convq.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "nlfp/errors.hpp"

namespace nlfp::convq {

TimeGrid TimeGrid::uniform(double step, std::size_t steps) {
  if (!(step > 0.0) || steps == 0) throw std::invalid_argument("TimeGrid: bad uniform grid");
  std::vector<double> nodes(steps + 1);
  for (std::size_t n = 0; n <= steps; ++n) nodes[n] = step * (double)n;
  return TimeGrid(std::move(nodes), true);
}

TimeGrid TimeGrid::geometric(double first_step, double ratio, std::size_t steps) {
  if (!(first_step > 0.0) || !(ratio > 1.0) || steps == 0)
    throw std::invalid_argument("TimeGrid: bad geometric grid");
  std::vector<double> nodes(steps + 1);
  nodes[0] = 0.0;
  double h = first_step;
  for (std::size_t n = 1; n <= steps; ++n) {
    nodes[n] = nodes[n - 1] + h;
    h *= ratio;
  }
  return TimeGrid(std::move(nodes), false);
}

ConvexFunction power_convex(double p) {
  return {[p](double y) { return std::pow(y, p); },
          [p](double y) { return p * std::pow(y, p - 1.0); }};
}

ConvolutionWeights::ConvolutionWeights(const kernels::KernelSpec& spec, TimeGrid grid)
    : spec_(spec), grid_(std::move(grid)) {
  const std::size_t N = grid_.steps();
  const auto& t = grid_.nodes();
  row_sums_.assign(N + 1, 0.0);

  if (grid_.is_uniform()) {
    kappa_.resize(N);
    for (std::size_t m = 0; m < N; ++m) kappa_[m] = spec_.integrated_k(t[m], t[m + 1]);
    for (std::size_t n = 1; n <= N; ++n) row_sums_[n] = row_sums_[n - 1] + kappa_[n - 1];
  } else {
    kappa_.resize(N * (N + 1) / 2);
    std::size_t idx = 0;
    for (std::size_t n = 1; n <= N; ++n) {
      double rs = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double a = t[n] - t[j];
        const double b = t[n] - t[j - 1];
        kappa_[idx] = (j == n) ? spec_.integrated_k(0.0, b) : spec_.integrated_k(a, b);
        rs += kappa_[idx];
        ++idx;
      }
      row_sums_[n] = rs;
    }
  }

  // discrete complementary kernel: triangular solve of sum_j gamma_j K(n,j) = 1
  std::vector<double> gamma(N + 1, 0.0);
  l_weights_.assign(N, 0.0);
  for (std::size_t n = 1; n <= N; ++n) {
    const double lead = k_weight(n, n);
    if (!(lead > 0.0))
      throw numerical_error("ConvolutionWeights: vanishing leading weight", lead);
    double acc = 0.0;
    for (std::size_t j = 1; j < n; ++j) acc += gamma[j] * k_weight(n, j);
    gamma[n] = (1.0 - acc) / lead;
    l_weights_[n - 1] = gamma[n] * grid_.step(n);
  }
}

double ConvolutionWeights::k_weight(std::size_t n, std::size_t j) const {
  if (grid_.is_uniform()) return kappa_[n - j];
  return kappa_[n * (n - 1) / 2 + (j - 1)];
}

double ConvolutionWeights::cumulative_l(std::size_t n) const {
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) sum += l_weights_[j];
  return sum;
}

double ConvolutionWeights::complementarity_residual() const {
  const std::size_t N = grid_.steps();
  double worst = 0.0;
  for (std::size_t n = 1; n <= N; ++n) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= n; ++j)
      acc += (l_weights_[j - 1] / grid_.step(j)) * k_weight(n, j);
    worst = std::max(worst, std::fabs(acc - 1.0));
  }
  return worst;
}

RelaxationCurve solve_relaxation(const ConvolutionWeights& weights, double mu) {
  if (!(mu >= 0.0)) throw std::invalid_argument("solve_relaxation: mu must be nonnegative");
  const TimeGrid& grid = weights.grid();
  const std::size_t N = grid.steps();
  const auto& t = grid.nodes();

  RelaxationCurve curve;
  curve.mu = mu;
  curve.times = t;
  curve.values.assign(N + 1, 1.0);
  curve.lower_env.assign(N + 1, 1.0);
  curve.upper_env.assign(N + 1, 1.0);

  constexpr double kSlack = 1e-10;
  double phi_prev = 0.0;  // (k * [s-1])(t_{n-1})
  for (std::size_t n = 1; n <= N; ++n) {
    const double h = grid.step(n);
    const double lead = weights.k_weight(n, n);
    double memory = 0.0;
    for (std::size_t j = 1; j < n; ++j)
      memory += weights.k_weight(n, j) * (curve.values[j] - 1.0);
    // max with 0: the numerator cancels at the rounding floor once the true
    // solution has decayed below ~1e-16 (certified lower envelope is >= 0)
    const double s = std::max((lead + phi_prev - memory) / (lead + mu * h), 0.0);
    curve.values[n] = s;
    phi_prev = lead * (s - 1.0) + memory;

    // mu == 0 collapses both envelopes to 1 (and guards 0/0 when k underflows)
    curve.lower_env[n] = (mu == 0.0) ? 1.0 : 1.0 / (1.0 + mu / weights.kernel().eval_k(t[n]));
    curve.upper_env[n] = 1.0 / (1.0 + mu * t[n] / weights.row_sum(n));
    if (s < curve.lower_env[n] - kSlack || s > curve.upper_env[n] + kSlack)
      throw envelope_violation(n, t[n], s, curve.lower_env[n], curve.upper_env[n]);
  }
  return curve;
}

void RelaxationCurve::write_csv(std::ostream& os) const {
  os << "t,s_mu,lower_env,upper_env\n";
  char buf[160];
  for (std::size_t n = 0; n < times.size(); ++n) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g\n", times[n], values[n],
                  lower_env[n], upper_env[n]);
    os << buf;
  }
}

double apply_nonlocal_derivative(const ConvolutionWeights& weights,
                                 std::span<const double> history, double baseline) {
  const std::size_t n = history.size();
  if (n == 0) throw std::invalid_argument("apply_nonlocal_derivative: empty history");
  if (n > weights.grid().steps())
    throw std::invalid_argument("apply_nonlocal_derivative: history longer than grid");
  double phi_n = 0.0, phi_prev = 0.0;
  for (std::size_t j = 1; j <= n; ++j) phi_n += weights.k_weight(n, j) * (history[j - 1] - baseline);
  for (std::size_t j = 1; j < n; ++j)
    phi_prev += weights.k_weight(n - 1, j) * (history[j - 1] - baseline);
  return (phi_n - phi_prev) / weights.grid().step(n);
}

double check_fundamental_identity_discrete(std::span<const double> values, double step,
                                           const ConvexFunction& psi) {
  if (!(step > 0.0)) throw std::invalid_argument("check_fundamental_identity: step must be > 0");
  double worst = 0.0;
  for (std::size_t n = 1; n < values.size(); ++n) {
    const double u = values[n], up = values[n - 1];
    const double lhs = psi.derivative(u) * (u - up) / step;
    const double rhs = (psi.value(u) - psi.value(up)) / step +
                       (psi.value(up) - psi.value(u) - psi.derivative(u) * (up - u)) / step;
    worst = std::max(worst, std::fabs(lhs - rhs));
  }
  return worst;
}

double check_convexity_inequality(const ConvolutionWeights& weights,
                                  std::span<const double> values, double baseline,
                                  const ConvexFunction& psi) {
  const std::size_t n = values.size();
  if (n == 0 || n > weights.grid().steps())
    throw std::invalid_argument("check_convexity_inequality: bad history length");
  std::vector<double> psi_values(n);
  for (std::size_t i = 0; i < n; ++i) psi_values[i] = psi.value(values[i]);
  const double psi_baseline = psi.value(baseline);

  double margin = std::numeric_limits<double>::infinity();
  for (std::size_t m = 1; m <= n; ++m) {
    const std::span<const double> head(values.data(), m);
    const std::span<const double> psi_head(psi_values.data(), m);
    const double lhs = psi.derivative(values[m - 1]) *
                       apply_nonlocal_derivative(weights, head, baseline);
    const double rhs = apply_nonlocal_derivative(weights, psi_head, psi_baseline);
    margin = std::min(margin, lhs - rhs);
  }
  return margin;
}

}  // namespace nlfp::convq
