// lab.hpp
// Verification laboratory: uniform-in-tau stability monitors, error norms
// against the tau = 0 limit, log-log rate fits, closed-form scalar oracles
// and manufactured solutions.

#pragma once

#include <array>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "hyperch/galerkin.hpp"
#include "hyperch/integrators.hpp"

namespace hyperch {

struct StabilityReport {
  double phi_H1Vstar = 0.0;
  double phi_LinfW = 0.0;
  double mu_LinfWstar = 0.0;
  double w_LinfH = 0.0;
  double tau_dtt_L2Zstar = 0.0;
  double sqrt_tau_dt_LinfVstar = 0.0;

  static constexpr std::array<std::string_view, 6> field_names{
      "phi_H1Vstar", "phi_LinfW", "mu_LinfWstar", "w_LinfH", "tau_dtt_L2Zstar",
      "sqrt_tau_dt_LinfVstar"};
  std::array<double, 6> values() const {
    return {phi_H1Vstar, phi_LinfW, mu_LinfWstar, w_LinfH, tau_dtt_L2Zstar, sqrt_tau_dt_LinfVstar};
  }
};

/// Time norms by trapezoid / max over samples. d/dt phi comes from the rho
/// samples when present, else from finite differences of phi; the second
/// derivative is a finite difference of the first.
StabilityReport stability_report(const Trajectory& traj, double tau, const GalerkinSystem& system);

struct ErrorReport {
  double c0_vstar = 0.0;
  double l2_w = 0.0;
  double l2_wstar_mu = 0.0;
  double l2_h_w = 0.0;
  double tau = 0.0;

  static constexpr std::array<std::string_view, 4> field_names{"c0_vstar", "l2_w", "l2_wstar_mu",
                                                               "l2_h_w"};
  std::array<double, 4> values() const { return {c0_vstar, l2_w, l2_wstar_mu, l2_h_w}; }
};

/// Differences between a relaxed trajectory and the reference on their shared samples.
ErrorReport error_report(const Trajectory& traj_tau, const Trajectory& traj_ref,
                         const GalerkinSystem& system);

/// Same, restricted to sample indices `stride * i` (plus the last sample).
ErrorReport error_report_subsampled(const Trajectory& traj_tau, const Trajectory& traj_ref,
                                    const GalerkinSystem& system, std::size_t stride);

struct RatePoint {
  double tau = 0.0;
  double error = 0.0;
};

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<RatePoint> points;
};

/// Least-squares line through (log tau, log error).
RateFit rate_fit(std::span<const RatePoint> points);

/// Closed form of tau c'' + c' + a c = g, c(0) = c0, c'(0) = c1 (tau >= 0;
/// c1 is ignored for tau = 0). Underdamped, critical and overdamped branches
/// share one expression so values are continuous across 1 = 4 tau a.
class DampedScalarOde {
 public:
  DampedScalarOde(double tau, double stiffness, double forcing, double c0, double c1,
                  double horizon = -1.0);

  double operator()(double t) const;
  double derivative(double t) const;

 private:
  double tau_, a_, g_, c0_, c1_, horizon_;
};

/// tau m'' + m' + sigma m = g_mean for the spatial mean; sigma must be positive.
DampedScalarOde mean_ode_oracle(double tau, double sigma, double g_mean, double m0, double m1,
                                double T);

/// Mode k of the beta == 0 system: tau c'' + c' + A_k c = g_k.
DampedScalarOde linear_mode_oracle(double lambda_k, const PotentialSpec& params, double tau,
                                   double phi0_k, double rho0_k, double g_k);

/// Scalar time factor theta(t) of a manufactured term.
struct TimeProfile {
  enum class Kind { constant, exponential, cosine };
  Kind kind = Kind::constant;
  double rate = 0.0;  // exp(rate t) or cos(rate t)

  double value(double t) const;
  double d1(double t) const;
  double d2(double t) const;
};

/// phi*(x, t) = sum_i profile_i(x) theta_i(t).
struct ManufacturedSolution {
  struct Term {
    SpectralField profile;
    TimeProfile time;
  };
  std::vector<Term> terms;

  /// Time derivative of order 0, 1 or 2 at t, on domain d.
  SpectralField eval(double t, const DomainSpec& d, int order = 0) const;
};

/// g = tau phi*'' + phi*' + sigma phi* + Lambda mu(phi*), so phi* solves the
/// semi-discrete system exactly. Throws if phi* leaves the retained band.
ForcingSpec mms_forcing(const ManufacturedSolution& phi_star, const GalerkinSystem& system,
                        double tau);

/// sup_t |int_0^t mu|_V by cumulative trapezoid.
double mu_time_integral_monitor(const Trajectory& traj, const GalerkinSystem& system);

// ------------------------------------------------------------------ tau sweep

struct SweepSetup {
  SpectralField phi0;
  SpectralField rho0;
  std::vector<double> taus;  // strictly decreasing
  double T = 1.0;
  double dt = 2e-5;                 // relaxed runs (imex1_hyperbolic)
  double reference_dt = 2e-5;       // tau = 0 reference
  Scheme reference_scheme = Scheme::imex2_parabolic;
  double save_every = 1e-3;
  int jobs = 1;
};

struct SweepEntry {
  double tau = 0.0;
  ErrorReport errors;
  ErrorReport errors_half_rate;  // every second sample, for the quadrature check
  StabilityReport stability;
  double mu_integral = 0.0;
};

struct SweepResult {
  StabilityReport reference_stability;
  double reference_mu_integral = 0.0;
  // Richardson estimate of the reference's own time-discretization error,
  // per ErrorReport field (from a companion run at twice the step; NaN when
  // save_every is not a multiple of that step).
  std::array<double, 4> reference_error_estimate{};
  // max over tau and fields of |full - half-rate| / full.
  double quadrature_rel_change = 0.0;
  std::vector<SweepEntry> entries;  // sorted by decreasing tau
  std::array<RateFit, 4> fits;      // one per ErrorReport field
};

SweepResult run_tau_sweep(const SweepSetup& setup, const GalerkinSystem& system);

}  // namespace hyperch
