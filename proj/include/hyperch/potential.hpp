// potential.hpp
// Double-well structure F(s) = beta_hat(s) - (lambda/2) s^2 with a polynomial beta.

#pragma once

#include <utility>
#include <vector>

namespace hyperch {

/// One monomial c * s^degree of beta.
struct BetaTerm {
  int degree = 3;
  double coeff = 1.0;

  bool operator==(const BetaTerm&) const = default;
};

/// Nonlinearity family (beta, lambda, nu, sigma).
///
/// beta is stored as a dense coefficient vector indexed by degree. The
/// regular constructor accepts odd degrees >= 3 only, which makes
/// beta(0) = beta''(0) = 0 structural. `from_raw_coefficients` bypasses that
/// check so the assumption validator can be exercised on bad input.
/// Diagnostic mode admits sigma = 0 and beta == 0 (linear / undamped oracles).
class PotentialSpec {
 public:
  enum class Mode { strict, diagnostic };

  PotentialSpec(std::vector<BetaTerm> terms, double lambda, double nu, double sigma,
                Mode mode = Mode::strict);

  /// beta(s) = s^3, lambda = 1: F(s) = (s^2 - 1)^2 / 4.
  static PotentialSpec classical(double nu = 1.0, double sigma = 0.1);

  /// beta == 0 (diagnostic mode): the reduced system decouples into linear modes.
  static PotentialSpec linear(double lambda, double nu, double sigma);

  /// Arbitrary polynomial coefficients c[0] + c[1] s + ...; no structural checks.
  static PotentialSpec from_raw_coefficients(std::vector<double> coeffs_by_degree, double lambda,
                                             double nu, double sigma);

  double lambda() const { return lambda_; }
  double nu() const { return nu_; }
  double sigma() const { return sigma_; }
  Mode mode() const { return mode_; }
  bool diagnostic() const { return mode_ == Mode::diagnostic; }
  bool raw() const { return raw_; }

  /// Additive constant of beta_hat, chosen so that min F = 0 for beta = s^3.
  double hat_offset() const { return hat_offset_; }
  void set_hat_offset(double offset) { hat_offset_ = offset; }

  /// True when beta vanishes identically.
  bool beta_is_zero() const;

  const std::vector<double>& coefficients() const { return coeffs_; }
  /// Nonzero terms in increasing degree order.
  std::vector<BetaTerm> terms() const;

  bool operator==(const PotentialSpec&) const = default;

 private:
  PotentialSpec() = default;

  std::vector<double> coeffs_;
  double lambda_ = 1.0;
  double nu_ = 1.0;
  double sigma_ = 0.1;
  double hat_offset_ = 0.25;
  Mode mode_ = Mode::strict;
  bool raw_ = false;
};

/// beta^{(order)}(s) for order in 0..3.
double beta_eval(const PotentialSpec& spec, double s, int order);

/// Antiderivative of beta plus `hat_offset`.
double beta_hat(const PotentialSpec& spec, double s);

/// f(s) = F'(s) = beta(s) - lambda s.
double f_eval(const PotentialSpec& spec, double s);

/// F(s) = beta_hat(s) - (lambda/2) s^2.
double F_eval(const PotentialSpec& spec, double s);

struct ValidationReport {
  bool beta_zero_at_origin = false;
  bool beta_second_zero_at_origin = false;
  bool third_derivative_nonnegative = false;
  double min_third_derivative = 0.0;
  bool superlinear = false;
  bool c_beta_finite = false;
  double c_beta = 0.0;
  bool constants_positive = false;
  bool diagnostic = false;

  bool all_pass() const {
    return beta_zero_at_origin && beta_second_zero_at_origin && third_derivative_nonnegative &&
           superlinear && c_beta_finite && constants_positive;
  }
};

/// Checks the structural assumptions on samples of [range.first, range.second].
ValidationReport validate_assumptions(const PotentialSpec& spec,
                                      std::pair<double, double> range, int n_samples);

}  // namespace hyperch
