// integrators.hpp
// Fixed-step IMEX integrators for the relaxed (tau > 0) and limit (tau = 0)
// reduced systems. The diagonal linear operator A is implicit, the
// nonlinear remainder N explicit.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperch/galerkin.hpp"

namespace hyperch {

enum class Scheme { imex1_hyperbolic, imex1_parabolic, imex2_parabolic };

std::string_view to_string(Scheme s);
Scheme scheme_from_string(std::string_view name);
/// Convergence order of the scheme in dt.
int scheme_order(Scheme s);
bool scheme_is_hyperbolic(Scheme s);

struct StepConfig {
  double dt = 1e-4;
  Scheme scheme = Scheme::imex1_parabolic;
  bool guard = true;  // reject steps whose implicit factor is not positive
};

struct SolverState {
  SpectralField phi;
  std::optional<SpectralField> rho;  // d phi / dt, present iff tau > 0
  double t = 0.0;
  double tau = 0.0;

  /// Previous step, kept by the two-step scheme.
  struct History {
    SpectralField phi;
    SpectralField nonlinear;
  };
  std::optional<History> history;
};

/// Projects phi0 (and rho0) onto the retained modes. rho0 defaults to zero for tau > 0.
SolverState init_state(const SpectralField& phi0, const std::optional<SpectralField>& rho0,
                       double tau, const GalerkinSystem& system);

SolverState step_parabolic(const SolverState& state, const StepConfig& cfg,
                           const GalerkinSystem& system);
SolverState step_hyperbolic(const SolverState& state, const StepConfig& cfg,
                            const GalerkinSystem& system);
/// Dispatches on cfg.scheme.
SolverState step(const SolverState& state, const StepConfig& cfg, const GalerkinSystem& system);

struct MonitorSample {
  double t = 0.0;
  double energy = 0.0;
  double willmore = 0.0;
  double ginzburg_landau = 0.0;
  double phi_vstar = 0.0;
  double phi_w = 0.0;
  double rho_vstar = 0.0;
  double lyapunov = 0.0;  // (tau/2) |rho|_*^2 + energy
};

class Trajectory {
 public:
  double tau = 0.0;
  std::vector<double> times;
  std::vector<SpectralField> phi;
  std::vector<SpectralField> rho;  // empty when tau == 0
  std::vector<MonitorSample> monitors;

  std::size_t size() const { return times.size(); }
  bool has_rho() const { return !rho.empty(); }

  /// w and mu per sample, computed on first use.
  const std::vector<ChemicalFields>& chemical(const GalerkinSystem& system) const;

 private:
  mutable std::vector<ChemicalFields> chemical_;
};

MonitorSample monitor(const SolverState& state, const GalerkinSystem& system);

/// Marches from state.t to state.t + T with fixed dt. Samples at t0, every
/// save_every (a multiple of dt; <= 0 keeps only the endpoints) and the end.
Trajectory run(const GalerkinSystem& system, SolverState state, const StepConfig& cfg, double T,
               double save_every, bool record_monitors = true);

}  // namespace hyperch
