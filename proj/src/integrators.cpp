// integrators.cpp

#include "hyperch/integrators.hpp"

#include <cmath>
#include <sstream>

#include "hyperch/error.hpp"
#include "hyperch/sobolev.hpp"

namespace hyperch {

std::string_view to_string(Scheme s) {
  switch (s) {
    case Scheme::imex1_hyperbolic: return "imex1_hyperbolic";
    case Scheme::imex1_parabolic: return "imex1_parabolic";
    case Scheme::imex2_parabolic: return "imex2_parabolic";
  }
  return "?";
}

Scheme scheme_from_string(std::string_view name) {
  if (name == "imex1_hyperbolic") return Scheme::imex1_hyperbolic;
  if (name == "imex1_parabolic") return Scheme::imex1_parabolic;
  if (name == "imex2_parabolic") return Scheme::imex2_parabolic;
  throw ArgumentError("unknown scheme '" + std::string(name) + "'");
}

int scheme_order(Scheme s) { return s == Scheme::imex2_parabolic ? 2 : 1; }

bool scheme_is_hyperbolic(Scheme s) { return s == Scheme::imex1_hyperbolic; }

namespace {

void guard_fail(const char* what, std::size_t k, double value, double t) {
  std::ostringstream os;
  os << what << " = " << value << " <= 0 at mode " << k << "; reduce dt";
  throw StepSizeError(os.str(), t);
}

void require_finite(const SolverState& s) {
  if (!s.phi.all_finite() || (s.rho && !s.rho->all_finite()))
    throw NumericalOverflowError("integrator: state became non-finite", s.t);
}

SpectralField remainder_at(const GalerkinSystem& system, const SpectralField& phi, double t) {
  try {
    return system.nonlinear_remainder(phi);
  } catch (const NumericalOverflowError& e) {
    throw NumericalOverflowError(e.what(), t);
  }
}

}  // namespace

SolverState init_state(const SpectralField& phi0, const std::optional<SpectralField>& rho0,
                       double tau, const GalerkinSystem& system) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ArgumentError("init_state: tau must be >= 0");
  if (!phi0.domain.same_space(system.domain()))
    throw ShapeError("init_state: phi0 does not match the system modes");
  if (tau == 0.0 && rho0)
    throw ArgumentError("init_state: tau = 0 takes no initial velocity rho0");
  if (rho0 && !rho0->domain.same_space(system.domain()))
    throw ShapeError("init_state: rho0 does not match the system modes");

  SolverState s;
  s.phi = system.truncate(phi0);
  s.phi.domain = system.domain();
  s.tau = tau;
  s.t = 0.0;
  if (tau > 0.0) {
    s.rho = rho0 ? system.truncate(*rho0) : SpectralField(system.domain());
    s.rho->domain = system.domain();
  }
  require_finite(s);
  return s;
}

SolverState step_parabolic(const SolverState& state, const StepConfig& cfg,
                           const GalerkinSystem& system) {
  if (state.tau != 0.0) throw ArgumentError("step_parabolic: requires tau = 0");
  if (cfg.scheme == Scheme::imex1_hyperbolic)
    throw ArgumentError("step_parabolic: hyperbolic scheme requested");
  const double dt = cfg.dt;
  const auto& a = system.stiffness();
  const std::size_t n = a.size();

  const SpectralField nl = remainder_at(system, state.phi, state.t);
  SolverState next = state;
  next.t = state.t + dt;

  const bool two_step = cfg.scheme == Scheme::imex2_parabolic && state.history.has_value();
  if (!two_step) {
    // (phi' - phi)/dt + A phi' + N(phi) = g(t)
    const SpectralField g = system.forcing_at(state.t);
    for (std::size_t k = 0; k < n; ++k) {
      const double denom = 1.0 + dt * a[k];
      if (cfg.guard && !(denom > 0.0)) guard_fail("1 + dt*A_k", k, denom, state.t);
      next.phi.coeffs[k] = (state.phi.coeffs[k] + dt * (g.coeffs[k] - nl.coeffs[k])) / denom;
    }
  } else {
    // (3 phi' - 4 phi + phi_prev)/(2 dt) + A phi' = g(t') - (2 N - N_prev)
    const SpectralField g = system.forcing_at(next.t);
    const auto& h = *state.history;
    for (std::size_t k = 0; k < n; ++k) {
      const double denom = 3.0 + 2.0 * dt * a[k];
      if (cfg.guard && !(denom > 0.0)) guard_fail("3 + 2*dt*A_k", k, denom, state.t);
      const double explicit_part = g.coeffs[k] - 2.0 * nl.coeffs[k] + h.nonlinear.coeffs[k];
      next.phi.coeffs[k] =
          (4.0 * state.phi.coeffs[k] - h.phi.coeffs[k] + 2.0 * dt * explicit_part) / denom;
    }
  }
  if (cfg.scheme == Scheme::imex2_parabolic)
    next.history = SolverState::History{state.phi, nl};
  else
    next.history.reset();
  require_finite(next);
  return next;
}

SolverState step_hyperbolic(const SolverState& state, const StepConfig& cfg,
                            const GalerkinSystem& system) {
  if (!(state.tau > 0.0) || !state.rho) throw ArgumentError("step_hyperbolic: requires tau > 0");
  if (cfg.scheme != Scheme::imex1_hyperbolic)
    throw ArgumentError("step_hyperbolic: parabolic scheme requested");
  const double dt = cfg.dt;
  const double tau = state.tau;
  const auto& a = system.stiffness();

  const SpectralField nl = remainder_at(system, state.phi, state.t);
  const SpectralField g = system.forcing_at(state.t);
  SolverState next = state;
  next.t = state.t + dt;
  auto& rho = *next.rho;
  // tau (rho' - rho)/dt + rho' + A (phi + dt rho') + N(phi) = g(t),  phi' = phi + dt rho'
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double det = tau + dt + a[k] * dt * dt;
    if (cfg.guard && !(det > 0.0)) guard_fail("tau + dt + dt^2*A_k", k, det, state.t);
    const double r = (tau * state.rho->coeffs[k] +
                      dt * (g.coeffs[k] - nl.coeffs[k] - a[k] * state.phi.coeffs[k])) /
                     det;
    rho.coeffs[k] = r;
    next.phi.coeffs[k] = state.phi.coeffs[k] + dt * r;
  }
  require_finite(next);
  return next;
}

SolverState step(const SolverState& state, const StepConfig& cfg, const GalerkinSystem& system) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ArgumentError("step: dt must be positive");
  return scheme_is_hyperbolic(cfg.scheme) ? step_hyperbolic(state, cfg, system)
                                          : step_parabolic(state, cfg, system);
}

const std::vector<ChemicalFields>& Trajectory::chemical(const GalerkinSystem& system) const {
  if (chemical_.size() != phi.size()) {
    chemical_.clear();
    chemical_.reserve(phi.size());
    for (const auto& p : phi) chemical_.push_back(system.chemical(p));
  }
  return chemical_;
}

MonitorSample monitor(const SolverState& state, const GalerkinSystem& system) {
  MonitorSample m;
  m.t = state.t;
  const EnergyBreakdown e = energy(state.phi, system.potential(), system.basis());
  m.energy = e.total;
  m.willmore = e.willmore_part;
  m.ginzburg_landau = e.gl_part;
  m.phi_vstar = norm(state.phi, NormKind::Vstar);
  m.phi_w = norm(state.phi, NormKind::W);
  m.rho_vstar = state.rho ? norm(*state.rho, NormKind::Vstar) : 0.0;
  m.lyapunov = 0.5 * state.tau * m.rho_vstar * m.rho_vstar + m.energy;
  return m;
}

Trajectory run(const GalerkinSystem& system, SolverState state, const StepConfig& cfg, double T,
               double save_every, bool record_monitors) {
  if (!(T >= 0.0) || !std::isfinite(T)) throw ArgumentError("run: T must be >= 0");
  if (!(cfg.dt > 0.0)) throw ArgumentError("run: dt must be positive");
  if (scheme_is_hyperbolic(cfg.scheme) != (state.tau > 0.0))
    throw ArgumentError("run: scheme " + std::string(to_string(cfg.scheme)) +
                        " is incompatible with tau = " + std::to_string(state.tau));

  const double steps_real = T / cfg.dt;
  const auto steps = static_cast<long long>(std::llround(steps_real));
  if (std::abs(steps_real - static_cast<double>(steps)) > 1e-9 * std::max(1.0, steps_real))
    throw ArgumentError("run: T must be an integer multiple of dt");
  long long stride = 0;
  if (save_every > 0.0) {
    const double s = save_every / cfg.dt;
    stride = std::llround(s);
    if (stride < 1 || std::abs(s - static_cast<double>(stride)) > 1e-9 * std::max(1.0, s))
      throw ArgumentError("run: save_every must be a positive multiple of dt");
  }

  const double t0 = state.t;
  Trajectory traj;
  traj.tau = state.tau;
  auto record = [&](const SolverState& s) {
    traj.times.push_back(s.t);
    traj.phi.push_back(s.phi);
    if (s.rho) traj.rho.push_back(*s.rho);
    if (record_monitors) traj.monitors.push_back(monitor(s, system));
  };

  record(state);
  for (long long i = 1; i <= steps; ++i) {
    state = step(state, cfg, system);
    state.t = t0 + static_cast<double>(i) * cfg.dt;
    if ((stride > 0 && i % stride == 0) || i == steps) record(state);
  }
  return traj;
}

}  // namespace hyperch
