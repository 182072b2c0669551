// potential.cpp

#include "hyperch/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "hyperch/error.hpp"

namespace hyperch {

namespace {

// d^order/ds^order of sum_k c[k] s^k, Horner form.
double poly_derivative(const std::vector<double>& c, double s, int order) {
  double acc = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= order; --k) {
    double falling = 1.0;
    for (int j = 0; j < order; ++j) falling *= static_cast<double>(k - j);
    acc = acc * s + c[static_cast<std::size_t>(k)] * falling;
  }
  return acc;
}

void check_constants(double lambda, double sigma, PotentialSpec::Mode mode) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw ArgumentError("potential: lambda must be positive, got " + std::to_string(lambda));
  if (mode == PotentialSpec::Mode::strict && !(sigma > 0.0))
    throw ArgumentError("potential: sigma must be positive (use diagnostic mode for sigma = 0)");
  if (mode == PotentialSpec::Mode::diagnostic && !(sigma >= 0.0))
    throw ArgumentError("potential: sigma must be nonnegative");
}

}  // namespace

PotentialSpec::PotentialSpec(std::vector<BetaTerm> terms, double lambda, double nu, double sigma,
                             Mode mode)
    : lambda_(lambda), nu_(nu), sigma_(sigma), hat_offset_(0.25 * lambda * lambda), mode_(mode) {
  check_constants(lambda, sigma, mode);
  if (!std::isfinite(nu)) throw ArgumentError("potential: nu must be finite");
  int max_degree = 0;
  for (const auto& t : terms) {
    if (t.degree < 3 || t.degree % 2 == 0)
      throw ArgumentError("potential: beta terms must have odd degree >= 3, got degree " +
                          std::to_string(t.degree));
    if (!std::isfinite(t.coeff)) throw ArgumentError("potential: non-finite beta coefficient");
    max_degree = std::max(max_degree, t.degree);
  }
  coeffs_.assign(static_cast<std::size_t>(max_degree) + 1, 0.0);
  for (const auto& t : terms) coeffs_[static_cast<std::size_t>(t.degree)] += t.coeff;
  if (mode == Mode::strict && beta_is_zero())
    throw ArgumentError("potential: beta == 0 is only allowed in diagnostic mode");
}

PotentialSpec PotentialSpec::classical(double nu, double sigma) {
  return PotentialSpec({{3, 1.0}}, 1.0, nu, sigma);
}

PotentialSpec PotentialSpec::linear(double lambda, double nu, double sigma) {
  return PotentialSpec({}, lambda, nu, sigma, Mode::diagnostic);
}

PotentialSpec PotentialSpec::from_raw_coefficients(std::vector<double> coeffs_by_degree,
                                                   double lambda, double nu, double sigma) {
  PotentialSpec p;
  p.coeffs_ = std::move(coeffs_by_degree);
  p.lambda_ = lambda;
  p.nu_ = nu;
  p.sigma_ = sigma;
  p.hat_offset_ = 0.25 * lambda * lambda;
  p.mode_ = Mode::diagnostic;
  p.raw_ = true;
  return p;
}

bool PotentialSpec::beta_is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](double c) { return c == 0.0; });
}

std::vector<BetaTerm> PotentialSpec::terms() const {
  std::vector<BetaTerm> out;
  for (std::size_t k = 0; k < coeffs_.size(); ++k)
    if (coeffs_[k] != 0.0) out.push_back({static_cast<int>(k), coeffs_[k]});
  return out;
}

double beta_eval(const PotentialSpec& spec, double s, int order) {
  if (order < 0 || order > 3)
    throw ArgumentError("beta_eval: derivative order must be in 0..3, got " +
                        std::to_string(order));
  return poly_derivative(spec.coefficients(), s, order);
}

double beta_hat(const PotentialSpec& spec, double s) {
  const auto& c = spec.coefficients();
  double acc = 0.0;
  for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
    acc = acc * s + c[static_cast<std::size_t>(k)] / static_cast<double>(k + 1);
  return acc * s + spec.hat_offset();
}

double f_eval(const PotentialSpec& spec, double s) {
  return beta_eval(spec, s, 0) - spec.lambda() * s;
}

double F_eval(const PotentialSpec& spec, double s) {
  return beta_hat(spec, s) - 0.5 * spec.lambda() * s * s;
}

ValidationReport validate_assumptions(const PotentialSpec& spec, std::pair<double, double> range,
                                      int n_samples) {
  const auto [lo, hi] = range;
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo))
    throw ArgumentError("validate_assumptions: sample range must be finite and nonempty");
  if (n_samples < 3) throw ArgumentError("validate_assumptions: need at least 3 samples");

  ValidationReport r;
  r.diagnostic = spec.diagnostic();
  r.beta_zero_at_origin = beta_eval(spec, 0.0, 0) == 0.0;
  r.beta_second_zero_at_origin = beta_eval(spec, 0.0, 2) == 0.0;
  r.constants_positive = spec.lambda() > 0.0 && spec.sigma() > 0.0;

  std::vector<double> s(static_cast<std::size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i)
    s[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / static_cast<double>(n_samples - 1);

  r.min_third_derivative = std::numeric_limits<double>::infinity();
  r.c_beta = 0.0;
  for (double x : s) {
    r.min_third_derivative = std::min(r.min_third_derivative, beta_eval(spec, x, 3));
    const double ratio =
        std::abs(beta_eval(spec, x, 2)) / (std::abs(beta_eval(spec, x, 1)) + 1.0);
    r.c_beta = std::max(r.c_beta, ratio);
  }
  r.third_derivative_nonnegative = r.min_third_derivative >= 0.0;
  r.c_beta_finite = std::isfinite(r.c_beta);

  // Superlinearity proxy: beta'(s)/|s| must grow monotonically over the outer
  // half of each side of the range, ending strictly above its inner value.
  auto side_ok = [&](double end) {
    if (end == 0.0) return true;
    const int m = std::max(3, n_samples / 2);
    double prev = -std::numeric_limits<double>::infinity();
    double first = 0.0;
    double last = 0.0;
    for (int i = 0; i < m; ++i) {
      const double x = end * (0.5 + 0.5 * i / static_cast<double>(m - 1));
      const double q = beta_eval(spec, x, 1) / std::abs(x);
      if (i == 0) first = q;
      if (q < prev) return false;
      prev = q;
      last = q;
    }
    return last > first;
  };
  const bool has_pos = hi > 0.0;
  const bool has_neg = lo < 0.0;
  r.superlinear = (has_pos || has_neg) && (!has_pos || side_ok(hi)) && (!has_neg || side_ok(lo));
  return r;
}

}  // namespace hyperch
