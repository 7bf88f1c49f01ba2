#include "nlfp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "nlfp/convq.hpp"
#include "nlfp/quadrature.hpp"
#include "nlfp/specfun.hpp"

namespace nlfp::kernels {

namespace {

constexpr double kEulerGamma = 0.5772156649015329;

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0))
    throw std::domain_error("KernelSpec: alpha must lie strictly inside (0,1)");
}

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error("KernelSpec: kernels are evaluated for t > 0 only");
}

// b^p - a^p for 0 <= a < b, p in (0,1]; uses expm1 to survive b - a << a.
double pow_diff(double a, double b, double p) {
  if (a == 0.0) return std::pow(b, p);
  return std::pow(a, p) * std::expm1(p * std::log(b / a));
}

const quad::Rule& gl64() { return quad::gauss_legendre(64); }

// int_a^b s^{-alpha} e^{-gamma s} ds / Gamma(1-alpha)
double tempered_integrated_k(double alpha, double gamma_rate, double a, double b) {
  if (a == 0.0) {
    // w = s^{1-alpha} removes the endpoint singularity
    const double p = 1.0 - alpha;
    const double w_end = std::pow(b, p);
    const double scale = specfun::reciprocal_gamma(2.0 - alpha);
    return scale * quad::integrate(
                       [&](double w) { return std::exp(-gamma_rate * std::pow(w, 1.0 / p)); }, 0.0,
                       w_end, 1e-15, 1e-12);
  }
  const double scale = specfun::reciprocal_gamma(1.0 - alpha);
  return scale * quad::integrate(
                     [&](double s) { return std::pow(s, -alpha) * std::exp(-gamma_rate * s); }, a,
                     b, 1e-16, 1e-12);
}

// int_0^t g_alpha(s) e^{-gamma s} ds via w = s^alpha
double tempered_cum_kernel(double alpha, double gamma_rate, double t) {
  const double w_end = std::pow(t, alpha);
  const double scale = specfun::reciprocal_gamma(1.0 + alpha);
  return scale * quad::integrate(
                     [&](double w) { return std::exp(-gamma_rate * std::pow(w, 1.0 / alpha)); },
                     0.0, w_end, 1e-15, 1e-12);
}

}  // namespace

double exp_e1_scaled(double t) {
  if (!(t > 0.0)) throw std::domain_error("exp_e1_scaled: argument must be positive");
  if (t <= 1.0) {
    // E_1(t) = -gamma - log t + sum_{k>=1} (-1)^{k+1} t^k / (k k!)
    double sum = 0.0, term = 1.0;
    for (int k = 1; k <= 40; ++k) {
      term *= -t / k;
      sum -= term / k;
      if (std::fabs(term) < 1e-18) break;
    }
    return std::exp(t) * (-kEulerGamma - std::log(t) + sum);
  }
  // modified Lentz on e^t E_1(t) = 1/(t+1- 1/(t+3- 4/(t+5- ...)))
  const double tiny = 1e-300;
  double b = t + 1.0;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 200; ++i) {
    const double an = -(double)i * i;
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h;
}

KernelSpec KernelSpec::fractional(double alpha) {
  check_alpha(alpha);
  return KernelSpec(Fractional{alpha});
}

KernelSpec KernelSpec::tempered_fractional(double alpha, double gamma_rate) {
  check_alpha(alpha);
  if (!(gamma_rate > 0.0)) throw std::domain_error("KernelSpec: gamma_rate must be positive");
  return KernelSpec(TemperedFractional{alpha, gamma_rate});
}

KernelSpec KernelSpec::multi_term(std::vector<MultiTermEntry> terms) {
  if (terms.empty()) throw std::domain_error("KernelSpec: multi-term list must be nonempty");
  for (const auto& e : terms) {
    check_alpha(e.alpha);
    if (!(e.delta > 0.0)) throw std::domain_error("KernelSpec: multi-term deltas must be positive");
  }
  for (std::size_t i = 1; i < terms.size(); ++i)
    if (!(terms[i].alpha > terms[i - 1].alpha))
      throw std::domain_error("KernelSpec: multi-term alphas must be strictly increasing");
  return KernelSpec(MultiTerm{std::move(terms)});
}

KernelSpec KernelSpec::distributed_order() { return KernelSpec(DistributedOrder{}); }

std::string KernelSpec::label() const {
  std::ostringstream os;
  if (const auto* f = std::get_if<Fractional>(&v_)) {
    os << "frac:" << f->alpha;
  } else if (const auto* tf = std::get_if<TemperedFractional>(&v_)) {
    os << "tempered:" << tf->alpha << "," << tf->gamma_rate;
  } else if (const auto* mt = std::get_if<MultiTerm>(&v_)) {
    os << "multiterm:";
    for (std::size_t i = 0; i < mt->terms.size(); ++i) {
      if (i) os << ",";
      os << mt->terms[i].delta << "," << mt->terms[i].alpha;
    }
  } else {
    os << "distributed";
  }
  return os.str();
}

double KernelSpec::eval_k(double t) const {
  check_t(t);
  if (const auto* f = std::get_if<Fractional>(&v_)) {
    return specfun::g_beta(1.0 - f->alpha, t);
  }
  if (const auto* tf = std::get_if<TemperedFractional>(&v_)) {
    return specfun::g_beta(1.0 - tf->alpha, t) * std::exp(-tf->gamma_rate * t);
  }
  if (const auto* mt = std::get_if<MultiTerm>(&v_)) {
    double sum = 0.0;
    for (const auto& e : mt->terms) sum += e.delta * specfun::g_beta(1.0 - e.alpha, t);
    return sum;
  }
  // distributed order: int_0^1 t^{beta-1} / Gamma(beta) dbeta, integrand entire in beta
  const double log_t = std::log(t);
  double sum = 0.0;
  const auto& rule = gl64();
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double beta = 0.5 + 0.5 * rule.nodes[i];
    sum += 0.5 * rule.weights[i] * std::exp((beta - 1.0) * log_t) *
           specfun::reciprocal_gamma(beta);
  }
  return sum;
}

double KernelSpec::integrated_k(double t) const { return integrated_k(0.0, t); }

double KernelSpec::integrated_k(double a, double b) const {
  if (!(b > a) || a < 0.0) throw std::domain_error("integrated_k: need 0 <= a < b");
  if (const auto* f = std::get_if<Fractional>(&v_)) {
    return pow_diff(a, b, 1.0 - f->alpha) * specfun::reciprocal_gamma(2.0 - f->alpha);
  }
  if (const auto* tf = std::get_if<TemperedFractional>(&v_)) {
    return tempered_integrated_k(tf->alpha, tf->gamma_rate, a, b);
  }
  if (const auto* mt = std::get_if<MultiTerm>(&v_)) {
    double sum = 0.0;
    for (const auto& e : mt->terms)
      sum += e.delta * pow_diff(a, b, 1.0 - e.alpha) * specfun::reciprocal_gamma(2.0 - e.alpha);
    return sum;
  }
  // distributed order: int_0^1 (b^beta - a^beta) / Gamma(beta+1) dbeta
  const auto& rule = gl64();
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    const double beta = 0.5 + 0.5 * rule.nodes[i];
    sum += 0.5 * rule.weights[i] * pow_diff(a, b, beta) * specfun::reciprocal_gamma(beta + 1.0);
  }
  return sum;
}

double KernelSpec::eval_cum_l(double t) const {
  check_t(t);
  if (const auto* f = std::get_if<Fractional>(&v_)) {
    return specfun::g_beta(1.0 + f->alpha, t);
  }
  if (const auto* tf = std::get_if<TemperedFractional>(&v_)) {
    // l = g_alpha e^{-gamma .} + gamma (1 * g_alpha e^{-gamma .}), hence
    // (1*l)(t) = A(t) + gamma (t A(t) - B(t)) with A = int_0^t g_alpha e^{-gamma s},
    // B = int_0^t s g_alpha(s) e^{-gamma s} ds.
    const double A = tempered_cum_kernel(tf->alpha, tf->gamma_rate, t);
    const double B =
        specfun::reciprocal_gamma(tf->alpha) *
        quad::integrate(
            [&](double s) { return std::pow(s, tf->alpha) * std::exp(-tf->gamma_rate * s); }, 0.0,
            t, 1e-15, 1e-12);
    return A + tf->gamma_rate * (t * A - B);
  }
  if (std::get_if<MultiTerm>(&v_)) {
    // no closed form: cumulative discrete complementary kernel on a fixed grid
    const auto grid = convq::TimeGrid::uniform(t / 1600.0, 1600);
    const convq::ConvolutionWeights w(*this, grid);
    return w.cumulative_l(grid.steps());
  }
  // distributed order: l(s) = e^s E_1(s); integrable log singularity at 0
  const double eps = std::min(t, 1e-6);
  const double log_eps = std::log(eps);
  double head = eps * (1.0 - kEulerGamma - log_eps) +
                eps * eps * (0.75 - 0.5 * kEulerGamma - 0.5 * log_eps);
  if (t <= 1e-6) return head;
  const double tail = quad::integrate(
      [](double v) {
        const double s = std::exp(v);
        return s * exp_e1_scaled(s);
      },
      log_eps, std::log(t), 1e-14, 1e-11);
  return head + tail;
}

DecayClass KernelSpec::decay_class() const {
  if (const auto* f = std::get_if<Fractional>(&v_)) return {DecayKind::Algebraic, f->alpha};
  if (std::get_if<TemperedFractional>(&v_)) return {DecayKind::Exponential, 0.0};
  if (const auto* mt = std::get_if<MultiTerm>(&v_)) {
    double min_alpha = mt->terms.front().alpha;
    for (const auto& e : mt->terms) min_alpha = std::min(min_alpha, e.alpha);
    return {DecayKind::Algebraic, min_alpha};
  }
  return {DecayKind::Logarithmic, 0.0};
}

}  // namespace nlfp::kernels
