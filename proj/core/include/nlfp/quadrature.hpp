#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace nlfp::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;
};

/// Adaptive Gauss-Kronrod (G7,K15) on [a,b]. Bisects until the local error
/// estimate meets abs_tol + rel_tol*|integral|.
Result gauss_kronrod(const std::function<double(double)>& f, double a, double b,
                     double abs_tol = 1e-14, double rel_tol = 1e-10, int max_depth = 36);

/// Convenience wrapper returning the value only; throws nlfp::accuracy_error
/// if the requested tolerance was not reached.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-14, double rel_tol = 1e-10);

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1,1]; tables are computed once and cached.
const Rule& gauss_legendre(std::size_t n);

/// Fixed Gauss-Legendre pass over [a,b].
double fixed_gauss_legendre(const std::function<double(double)>& f, double a, double b,
                            const Rule& rule);

/// Gauss-Hermite rule for the weight exp(-x^2) (physicists' convention).
Rule gauss_hermite(std::size_t n);

}  // namespace nlfp::quad
