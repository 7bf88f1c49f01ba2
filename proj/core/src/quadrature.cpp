#include "nlfp/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "nlfp/errors.hpp"

namespace nlfp::quad {

namespace {

// QUADPACK G7,K15 abscissae and weights on [-1,1].
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct Panel {
  double kronrod;
  double gauss;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const double fc = f(c);
  double k = kWgk[7] * fc;
  double g = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double fv = f(c - hw * kXgk[i]) + f(c + hw * kXgk[i]);
    k += kWgk[i] * fv;
    if (i % 2 == 1) g += kWg[i / 2] * fv;
  }
  return {k * hw, g * hw};
}

void adapt(const std::function<double(double)>& f, double a, double b, double abs_tol,
           double rel_tol, int depth, Result& acc) {
  const Panel p = gk15(f, a, b);
  const double err = std::fabs(p.kronrod - p.gauss);
  if (depth <= 0 || err <= abs_tol + rel_tol * std::fabs(p.kronrod)) {
    acc.value += p.kronrod;
    acc.error += err;
    return;
  }
  const double c = 0.5 * (a + b);
  adapt(f, a, c, 0.5 * abs_tol, rel_tol, depth - 1, acc);
  adapt(f, c, b, 0.5 * abs_tol, rel_tol, depth - 1, acc);
}

}  // namespace

Result gauss_kronrod(const std::function<double(double)>& f, double a, double b, double abs_tol,
                     double rel_tol, int max_depth) {
  Result acc;
  if (a == b) return acc;
  adapt(f, a, b, abs_tol, rel_tol, max_depth, acc);
  return acc;
}

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 double rel_tol) {
  const Result r = gauss_kronrod(f, a, b, abs_tol, rel_tol);
  if (r.error > 1e3 * (abs_tol + rel_tol * std::fabs(r.value)) && r.error > 1e-12)
    throw accuracy_error("integrate: adaptive quadrature did not converge", r.error);
  return r.value;
}

const Rule& gauss_legendre(std::size_t n) {
  static std::mutex mtx;
  static std::map<std::size_t, Rule> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  if (n < 2) throw std::invalid_argument("gauss_legendre: order must be >= 2");

  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const std::size_t m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p1 = 1.0, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) < 1e-15) break;
    }
    r.nodes[i] = -z;
    r.nodes[n - 1 - i] = z;
    r.weights[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  return cache.emplace(n, std::move(r)).first->second;
}

double fixed_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                            const Rule& rule) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    sum += rule.weights[i] * f(c + hw * rule.nodes[i]);
  return sum * hw;
}

Rule gauss_hermite(std::size_t n) {
  if (n < 2) throw std::invalid_argument("gauss_hermite: order must be >= 2");
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^{-1/4}
  const std::size_t m = (n + 1) / 2;
  double z = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow((double)n, 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * r.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * r.nodes[1];
    } else {
      z = 2.0 * z - r.nodes[i - 2];
    }
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = kPiQuarterInv, p2 = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / (j + 1.0)) * p2 - std::sqrt((double)j / (j + 1.0)) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double z1 = z;
      z = z1 - p1 / pp;
      if (std::fabs(z - z1) < 1e-14) break;
    }
    r.nodes[i] = z;
    r.nodes[n - 1 - i] = -z;
    r.weights[i] = 2.0 / (pp * pp);
    r.weights[n - 1 - i] = r.weights[i];
  }
  return r;
}

}  // namespace nlfp::quad
