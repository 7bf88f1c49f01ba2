#include "nlfp/entropy.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace nlfp::entropy {

namespace {

// width of the series window around x = 1; direct evaluation loses all
// significant digits well before |x-1| reaches machine scale
constexpr double kSeriesWindow = 1e-4;

double trapezoid(const std::vector<double>& f, double h) {
  double sum = 0.0;
  for (double v : f) sum += v;
  sum -= 0.5 * (f.front() + f.back());
  return sum * h;
}

void check_same_grid(const SpatialGrid& a, const SpatialGrid& b, const char* who) {
  if (!(a == b)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

}  // namespace

EntropyGenerator EntropyGenerator::power(double beta) {
  if (!(beta > 1.0) || !(beta <= 2.0))
    throw std::domain_error("EntropyGenerator: beta must lie in (1,2]");
  return EntropyGenerator(true, beta);
}

EntropyGenerator EntropyGenerator::logarithmic() { return EntropyGenerator(false, 0.0); }

double EntropyGenerator::beta() const {
  if (!is_power_) throw std::logic_error("EntropyGenerator: logarithmic generator has no beta");
  return beta_;
}

std::string EntropyGenerator::label() const {
  if (!is_power_) return "log";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "beta%g", beta_);
  return buf;
}

double EntropyGenerator::phi(double x) const {
  if (!(x >= 0.0)) throw std::domain_error("phi: argument must be nonnegative");
  const double e = x - 1.0;
  if (is_power_ && beta_ == 2.0) return e * e;
  if (is_power_) {
    if (std::fabs(e) < kSeriesWindow) {
      // sum_{k>=2} binom(beta,k) e^k, four terms
      const double b = beta_;
      const double c2 = b * (b - 1.0) / 2.0;
      const double c3 = c2 * (b - 2.0) / 3.0;
      const double c4 = c3 * (b - 3.0) / 4.0;
      const double c5 = c4 * (b - 4.0) / 5.0;
      return e * e * (c2 + e * (c3 + e * (c4 + e * c5)));
    }
    if (x == 0.0) return beta_ - 1.0;
    return std::pow(x, beta_) - 1.0 - beta_ * e;
  }
  if (x == 0.0) return 1.0;  // 0 log 0 := 0
  if (std::fabs(e) < kSeriesWindow) {
    // sum_{k>=2} (-1)^k e^k / (k(k-1))
    return e * e * (0.5 + e * (-1.0 / 6.0 + e * (1.0 / 12.0 - e / 20.0)));
  }
  return x * (std::log(x) - 1.0) + 1.0;
}

double EntropyGenerator::dphi(double x) const {
  if (is_power_) return beta_ * (std::pow(x, beta_ - 1.0) - 1.0);
  return std::log(x);
}

double EntropyGenerator::d2phi(double x) const {
  if (is_power_) return beta_ * (beta_ - 1.0) * std::pow(x, beta_ - 2.0);
  return 1.0 / x;
}

double EntropyGenerator::d3phi(double x) const {
  if (is_power_) return beta_ * (beta_ - 1.0) * (beta_ - 2.0) * std::pow(x, beta_ - 3.0);
  return -1.0 / (x * x);
}

double EntropyGenerator::d4phi(double x) const {
  if (is_power_)
    return beta_ * (beta_ - 1.0) * (beta_ - 2.0) * (beta_ - 3.0) * std::pow(x, beta_ - 4.0);
  return 2.0 / (x * x * x);
}

double phi_eval(const EntropyGenerator& gen, double x) { return gen.phi(x); }

double trapezoid_mass(const Field1D& u) { return trapezoid(u.values, u.grid.h()); }

double relative_entropy(const EntropyGenerator& gen, const Field1D& u,
                        const SteadyState1D& steady) {
  check_same_grid(u.grid, steady.grid, "relative_entropy");
  const double mass = trapezoid_mass(u);
  if (std::fabs(mass - 1.0) > 1e-8)
    throw std::invalid_argument("relative_entropy: input mass deviates from 1");
  std::vector<double> f(u.values.size());
  const bool quadratic = gen.is_power() && gen.beta() == 2.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = u.values[i] / steady.values[i];
    // the quadratic entropy extends to signed fields (section-5 optimality data)
    f[i] = quadratic ? (v - 1.0) * (v - 1.0) * steady.values[i]
                     : gen.phi(v) * steady.values[i];
  }
  return trapezoid(f, u.grid.h());
}

double ckp_bound(const EntropyGenerator& gen, double entropy_value) {
  if (!(entropy_value >= 0.0)) throw std::domain_error("ckp_bound: entropy must be nonnegative");
  return std::sqrt(2.0 * entropy_value / gen.d2phi_at_one());
}

double convex_sobolev_residual(const EntropyGenerator& gen, const Field1D& u,
                               const SteadyState1D& steady, double lambda) {
  check_same_grid(u.grid, steady.grid, "convex_sobolev_residual");
  if (!(lambda > 0.0)) throw std::domain_error("convex_sobolev_residual: lambda must be positive");
  const std::size_t n = u.values.size();
  const double h = u.grid.h();
  std::vector<double> v(n), lhs_f(n), rhs_f(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = u.values[i] / steady.values[i];
  for (std::size_t i = 0; i < n; ++i) {
    double dv;
    if (i == 0)
      dv = (v[1] - v[0]) / h;
    else if (i == n - 1)
      dv = (v[n - 1] - v[n - 2]) / h;
    else
      dv = (v[i + 1] - v[i - 1]) / (2.0 * h);
    lhs_f[i] = gen.phi(v[i]) * steady.values[i];
    rhs_f[i] = gen.d2phi(v[i]) * dv * dv * steady.values[i];
  }
  const double lhs = trapezoid(lhs_f, h);
  const double rhs = trapezoid(rhs_f, h) / (2.0 * lambda);
  return rhs - lhs;
}

double pointwise_F(double beta, double x, double y) {
  if (!(beta > 1.0) || !(beta <= 2.0)) throw std::domain_error("pointwise_F: beta must be in (1,2]");
  if (!(x >= 0.0) || !(y >= 0.0)) throw std::domain_error("pointwise_F: arguments must be >= 0");
  const EntropyGenerator gen = EntropyGenerator::power(beta);
  const double px = gen.phi(x);
  const double py = gen.phi(y);
  const double entropy_part = std::pow(px, (beta - 1.0) / beta) * std::pow(py, 1.0 / beta);
  // x^{beta-1} y + (1-beta) x - y + beta - 1, grouped to vanish exactly at x = 1
  const double affine_part = y * (std::pow(x, beta - 1.0) - 1.0) + (1.0 - beta) * (x - 1.0);
  return entropy_part - affine_part;
}

HolderBound entropy_holder_bound(double beta, const Field1D& f1, const Field1D& f2,
                                 const SteadyState1D& g) {
  check_same_grid(f1.grid, g.grid, "entropy_holder_bound");
  check_same_grid(f2.grid, g.grid, "entropy_holder_bound");
  const EntropyGenerator gen = EntropyGenerator::power(beta);
  const std::size_t n = g.values.size();
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double h1 = f1.values[i] / g.values[i];
    const double h2 = f2.values[i] / g.values[i];
    f[i] = (std::pow(h1, beta - 1.0) * h2 - h1) * g.values[i];
  }
  HolderBound out;
  out.lhs = trapezoid(f, g.grid.h());
  const double e1 = relative_entropy(gen, f1, g);
  const double e2 = relative_entropy(gen, f2, g);
  out.rhs = std::pow(e1, (beta - 1.0) / beta) * std::pow(e2, 1.0 / beta);
  return out;
}

double l1_distance(const Field1D& u, const SteadyState1D& steady) {
  check_same_grid(u.grid, steady.grid, "l1_distance");
  std::vector<double> f(u.values.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = std::fabs(u.values[i] - steady.values[i]);
  return trapezoid(f, u.grid.h());
}

}  // namespace nlfp::entropy
