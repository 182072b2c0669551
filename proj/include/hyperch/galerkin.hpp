// galerkin.hpp
// Reduced Faedo-Galerkin system on the span of the retained eigenfunctions:
//
//   tau phi_i'' + phi_i' + sigma phi_i + lambda_i mu_i = g_i
//   mu_i = (lambda_i + nu - lambda) w_i + [beta'(phi) w]_i
//   w    = -Delta phi + beta(phi) - lambda phi
//
// The product beta'(phi) w uses the unprojected w on the grid, so the
// discrete chemical potential is the exact gradient of the discrete energy.

#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "hyperch/potential.hpp"
#include "hyperch/spectral.hpp"

namespace hyperch {

struct ZeroForcing {};

/// g(x, t) = value, uniform in space and time.
struct ConstantForcing {
  double value = 0.0;
};

/// Spectral samples g(t_i); linear interpolation in time, clamped at the ends.
struct SpectralSeriesForcing {
  std::vector<double> times;
  std::vector<SpectralField> samples;
};

/// Arbitrary closure (manufactured solutions).
struct CallableForcing {
  std::function<SpectralField(double)> fn;
  std::string label;
};

class ForcingSpec {
 public:
  using Variant = std::variant<ZeroForcing, ConstantForcing, SpectralSeriesForcing, CallableForcing>;

  ForcingSpec() = default;
  ForcingSpec(Variant v);  // NOLINT(google-explicit-constructor)

  static ForcingSpec zero() { return ForcingSpec(ZeroForcing{}); }
  static ForcingSpec constant(double value) { return ForcingSpec(ConstantForcing{value}); }

  SpectralField evaluate(double t, const DomainSpec& d) const;
  bool is_zero() const { return std::holds_alternative<ZeroForcing>(v_); }
  const Variant& variant() const { return v_; }
  std::string describe() const;

 private:
  Variant v_ = ZeroForcing{};
};

/// w and mu for one state.
struct ChemicalFields {
  SpectralField w;
  SpectralField mu;
};

class GalerkinSystem {
 public:
  /// `retained` = per-axis cutoff n; zero entries mean "all modes".
  GalerkinSystem(const DomainSpec& domain, PotentialSpec potential,
                 ForcingSpec forcing = ForcingSpec::zero(), MultiIndex retained = {0, 0});

  const DomainSpec& domain() const { return basis_.domain(); }
  const SpectralBasis& basis() const { return basis_; }
  const PotentialSpec& potential() const { return potential_; }
  const ForcingSpec& forcing() const { return forcing_; }
  const MultiIndex& retained() const { return retained_; }
  const std::vector<double>& eigenvalues() const { return basis_.eigenvalues(); }

  /// P_n applied to a field.
  SpectralField truncate(const SpectralField& v) const { return project(v, retained_); }

  SpectralField compute_w(const SpectralField& phi) const;
  SpectralField compute_mu(const SpectralField& phi) const;
  ChemicalFields chemical(const SpectralField& phi) const;

  /// g(t) - sigma phi - Lambda mu(phi).
  SpectralField rhs_first_equation(const SpectralField& phi, double t) const;

  /// A_k = sigma + lambda_k (lambda_k - lambda)(lambda_k + nu - lambda).
  double linear_stiffness(std::size_t k) const { return stiffness_[k]; }
  double linear_stiffness(const MultiIndex& k) const;
  const std::vector<double>& stiffness() const { return stiffness_; }

  /// N(phi) with rhs = g - A phi - N(phi); N(0) = 0, N == 0 when beta == 0.
  SpectralField nonlinear_remainder(const SpectralField& phi) const;

  /// P_n g(t).
  SpectralField forcing_at(double t) const;

  /// Test hook: negate N(phi) in nonlinear_remainder only, so that checks
  /// comparing it against the chemical potential must fail.
  void inject_sign_fault(bool on) { sign_fault_ = on; }
  bool sign_fault() const { return sign_fault_; }

 private:
  struct GridTerms {
    SpectralField beta_proj;     // P_n beta(phi)
    SpectralField product_proj;  // P_n [beta'(phi) w]
  };
  GridTerms grid_terms(const SpectralField& phi) const;
  void check_input(const SpectralField& phi, const char* where) const;

  SpectralBasis basis_;
  PotentialSpec potential_;
  ForcingSpec forcing_;
  MultiIndex retained_;
  std::vector<double> stiffness_;
  std::vector<char> keep_;
  bool sign_fault_ = false;
};

}  // namespace hyperch
