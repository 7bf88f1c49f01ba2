#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlfp {

/// Requested tolerance could not be reached within the evaluation budget.
/// Carries the tolerance that was actually achieved.
class accuracy_error : public std::runtime_error {
 public:
  accuracy_error(const std::string& what, double achieved_tol)
      : std::runtime_error(what + " (achieved " + std::to_string(achieved_tol) + ")"),
        achieved_(achieved_tol) {}
  double achieved_tolerance() const { return achieved_; }

 private:
  double achieved_;
};

/// A computed relaxation curve left its certified a-priori envelope.
/// This signals scheme or grid inadequacy, never a recoverable condition.
class envelope_violation : public std::runtime_error {
 public:
  envelope_violation(std::size_t node, double t, double value, double lower, double upper)
      : std::runtime_error("relaxation envelope violated at node " + std::to_string(node) +
                           " (t=" + std::to_string(t) + ", s=" + std::to_string(value) +
                           ", env=[" + std::to_string(lower) + "," + std::to_string(upper) + "])"),
        node_(node), t_(t), value_(value), lower_(lower), upper_(upper) {}
  std::size_t node() const { return node_; }
  double t() const { return t_; }
  double value() const { return value_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  std::size_t node_;
  double t_, value_, lower_, upper_;
};

/// The requested certificate cannot be produced from the given data
/// (e.g. a spectral lower bound with a vanishing first coefficient).
class certificate_error : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A linear solve failed or produced an unacceptable residual.
class numerical_error : public std::runtime_error {
 public:
  numerical_error(const std::string& what, double residual)
      : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace nlfp
