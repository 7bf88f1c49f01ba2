#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "nlfp/convq.hpp"
#include "nlfp/entropy.hpp"
#include "nlfp/field.hpp"
#include "nlfp/kernels.hpp"

namespace nlfp::fpsolver {

/// Confining potential with a certified convexity lower bound V'' >= lambda.
class Potential1D {
 public:
  static Potential1D quadratic(double m);  // V = m x^2 / 2, lambda = m
  static Potential1D table(std::vector<double> values_on_cells, double lambda);

  bool is_quadratic() const { return table_.empty(); }
  double lambda() const { return lambda_; }
  double quadratic_m() const;
  double value(const SpatialGrid& grid, std::size_t i) const;

 private:
  Potential1D(double m, double lambda, std::vector<double> table)
      : m_(m), lambda_(lambda), table_(std::move(table)) {}
  double m_ = 1.0;
  double lambda_ = 1.0;
  std::vector<double> table_;
};

/// Tridiagonal matrix A with Au ~ d/dx(du/dx + u V') in conservative
/// exponential-fitting (Scharfetter-Gummel) form; zero-flux boundary, zero
/// column sums, discrete Gibbs state exactly in the kernel.
struct TridiagonalOperator {
  std::vector<double> lower;  // A(i, i-1), lower[0] unused
  std::vector<double> diag;
  std::vector<double> upper;  // A(i, i+1), upper[n-1] unused

  std::size_t size() const { return diag.size(); }
  std::vector<double> apply(std::span<const double> u) const;
  double column_sum(std::size_t j) const;
};

TridiagonalOperator build_spatial_operator(const Potential1D& potential, const SpatialGrid& grid);

/// Discrete Gibbs state: exp(-V(x_i)) normalized to unit midpoint mass.
Field1D discrete_gibbs(const Potential1D& potential, const SpatialGrid& grid);

/// One step of (I - tau A) u_n = u_{n-1}: mass conservative, positivity
/// preserving (M-matrix).
Field1D step_backward_difference(const Field1D& u_prev, double tau,
                                 const TridiagonalOperator& op);

/// One implicit step of the non-local scheme at node n = history.size():
/// history[0] is u_0 (the initial datum), history[j] the solution at t_j.
Field1D step_nonlocal(std::span<const Field1D> history, const convq::ConvolutionWeights& weights,
                      const TridiagonalOperator& op);

struct DecayFit {
  double rate = 0.0;       // log-log slope, semilog slope, or the constant c in c/log t
  double r_squared = 0.0;
};

/// Least-squares decay-rate fit in the coordinate system matching the decay
/// class; requires at least 8 points inside [window_lo, window_hi].
DecayFit fit_decay_rate(std::span<const double> times, std::span<const double> values,
                        const kernels::DecayClass& decay, double window_lo, double window_hi);

enum class Scheme { Nonlocal, BackwardDifference, Spectral };
enum class SpectralEvolution { Kernel, Classical, BackwardEuler };

struct HermiteInit {
  unsigned mode = 1;
  double amplitude = 0.5;
};
struct GaussianMixtureInit {
  struct Component {
    double weight, center, sigma;
  };
  std::vector<Component> components;
};
struct FileInit {
  std::string path;
};
using InitialData = std::variant<HermiteInit, GaussianMixtureInit, FileInit>;

struct ExperimentConfig {
  kernels::KernelSpec kernel = kernels::KernelSpec::fractional(0.5);
  Scheme scheme = Scheme::Nonlocal;
  SpectralEvolution spectral_evolution = SpectralEvolution::Kernel;  // tau = uniform grid step
  double potential_m = 1.0;
  std::vector<entropy::EntropyGenerator> generators{entropy::EntropyGenerator::power(2.0)};
  SpatialGrid space;
  convq::TimeGrid time = convq::TimeGrid::uniform(0.01, 1000);
  InitialData u0 = HermiteInit{};
  std::uint64_t seed = 0;
  double envelope_slack = 0.05;
  std::string output_dir;
};

struct EnvelopeViolationRecord {
  std::string generator;
  std::string envelope;  // "A" or "B"
  std::size_t node;
  double value;
  double bound;
};

struct SimResult {
  std::vector<double> times;
  std::vector<std::string> generator_labels;
  std::vector<double> initial_entropy;               // per generator
  std::vector<std::vector<double>> entropy_series;   // [generator][node]
  std::vector<double> envelope_a;                    // decay factor s_{2 lambda}(t_n)
  std::vector<int> envelope_b_generator;             // indices of power generators
  std::vector<std::vector<double>> envelope_b;       // factor (s_{2 lambda/beta})^beta
  std::vector<double> l1_distance;
  std::vector<double> mass_error;
  std::vector<double> min_value;
  std::vector<EnvelopeViolationRecord> violations;

  /// CSV columns: t, H_<gen>..., l1, envelopeA, envelopeB_<gen>..., mass_err
  void write_csv(std::ostream& os) const;
};

SimResult run_experiment(const ExperimentConfig& config);

}  // namespace nlfp::fpsolver
