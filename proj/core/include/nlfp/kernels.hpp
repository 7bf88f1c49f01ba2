#pragma once

#include <string>
#include <variant>
#include <vector>

namespace nlfp::kernels {

struct Fractional {
  double alpha;  // in (0,1)
};

struct TemperedFractional {
  double alpha;       // in (0,1)
  double gamma_rate;  // > 0
};

struct MultiTermEntry {
  double delta;  // > 0
  double alpha;  // in (0,1)
};

struct MultiTerm {
  std::vector<MultiTermEntry> terms;  // alphas strictly increasing
};

struct DistributedOrder {};  // k(t) = int_0^1 g_beta(t) dbeta, weight == 1

enum class DecayKind { Algebraic, Exponential, Logarithmic };

struct DecayClass {
  DecayKind kind;
  double exponent = 0.0;  // meaningful for Algebraic only
};

/// A kernel pair (k,l) with k nonnegative and nonincreasing and k*l == 1.
/// Only the four parametric families below are supported; each comes with an
/// evaluable k, an exact (or certified-quadrature) primitive of k, and the
/// cumulative complementary kernel (1*l).
class KernelSpec {
 public:
  using Variant = std::variant<Fractional, TemperedFractional, MultiTerm, DistributedOrder>;

  static KernelSpec fractional(double alpha);
  static KernelSpec tempered_fractional(double alpha, double gamma_rate);
  static KernelSpec multi_term(std::vector<MultiTermEntry> terms);
  static KernelSpec distributed_order();

  const Variant& variant() const { return v_; }
  std::string label() const;

  /// k(t), t > 0.
  double eval_k(double t) const;

  /// int_0^t k(s) ds.
  double integrated_k(double t) const;

  /// int_a^b k(s) ds for 0 <= a < b, stable for short intervals far from 0.
  double integrated_k(double a, double b) const;

  /// (1*l)(t): closed form for Fractional, quadrature of the explicit l for
  /// TemperedFractional and DistributedOrder, discrete complementary resolvent
  /// for MultiTerm (no closed form exists).
  double eval_cum_l(double t) const;

  DecayClass decay_class() const;

 private:
  explicit KernelSpec(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// exp(t) * E_1(t) without overflow (series below 1, continued fraction above).
double exp_e1_scaled(double t);

}  // namespace nlfp::kernels
