// lab.cpp

#include "hyperch/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "hyperch/error.hpp"
#include "hyperch/sobolev.hpp"

namespace hyperch {

namespace {

// d/dt of sampled fields on a possibly nonuniform time grid: second-order
// central differences inside, one-sided at the ends.
std::vector<SpectralField> time_derivative(const std::vector<double>& t,
                                           const std::vector<SpectralField>& f) {
  const std::size_t m = f.size();
  std::vector<SpectralField> out(m, SpectralField(f.front().domain));
  const std::size_t n = f.front().coeffs.size();
  for (std::size_t i = 0; i < m; ++i) {
    auto& d = out[i].coeffs;
    if (i == 0 || i + 1 == m) {
      const std::size_t a = i == 0 ? 0 : m - 2;
      const double h = t[a + 1] - t[a];
      for (std::size_t k = 0; k < n; ++k) d[k] = (f[a + 1][k] - f[a][k]) / h;
      continue;
    }
    const double h0 = t[i] - t[i - 1];
    const double h1 = t[i + 1] - t[i];
    const double cm = -h1 / (h0 * (h0 + h1));
    const double c0 = (h1 - h0) / (h0 * h1);
    const double cp = h0 / (h1 * (h0 + h1));
    for (std::size_t k = 0; k < n; ++k) d[k] = cm * f[i - 1][k] + c0 * f[i][k] + cp * f[i + 1][k];
  }
  return out;
}

// sqrt of the trapezoid integral of sq over the selected samples.
double l2_time(const std::vector<double>& t, const std::vector<double>& sq,
               const std::vector<std::size_t>& idx) {
  double acc = 0.0;
  for (std::size_t j = 1; j < idx.size(); ++j)
    acc += 0.5 * (t[idx[j]] - t[idx[j - 1]]) * (sq[idx[j]] + sq[idx[j - 1]]);
  return std::sqrt(acc);
}

std::vector<std::size_t> all_indices(std::size_t m) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

ErrorReport error_on(const Trajectory& a, const Trajectory& b, const GalerkinSystem& system,
                     const std::vector<std::size_t>& idx) {
  if (a.size() != b.size())
    throw ArgumentError("error_report: trajectories have different sample counts (" +
                        std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
  if (a.size() < 2) throw ArgumentError("error_report: need at least 2 samples");
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a.times[i] - b.times[i]) > 1e-12 * std::max(1.0, std::abs(a.times[i])))
      throw ArgumentError("error_report: sample times differ at index " + std::to_string(i));

  const auto& ca = a.chemical(system);
  const auto& cb = b.chemical(system);
  const std::size_t m = a.size();
  std::vector<double> w_sq(m), mu_sq(m), wh_sq(m);
  ErrorReport r;
  r.tau = a.tau;
  for (std::size_t i : idx) {
    const SpectralField dphi = a.phi[i] - b.phi[i];
    r.c0_vstar = std::max(r.c0_vstar, norm(dphi, NormKind::Vstar));
    w_sq[i] = norm_squared(dphi, NormKind::W);
    mu_sq[i] = norm_squared(ca[i].mu - cb[i].mu, NormKind::Wstar);
    wh_sq[i] = norm_squared(ca[i].w - cb[i].w, NormKind::H);
  }
  r.l2_w = l2_time(a.times, w_sq, idx);
  r.l2_wstar_mu = l2_time(a.times, mu_sq, idx);
  r.l2_h_w = l2_time(a.times, wh_sq, idx);
  return r;
}

}  // namespace

StabilityReport stability_report(const Trajectory& traj, double tau, const GalerkinSystem& system) {
  const std::size_t m = traj.size();
  if (m < 2) throw ArgumentError("stability_report: need at least 2 samples");
  const auto& t = traj.times;
  const auto& chem = traj.chemical(system);
  const std::vector<SpectralField> dphi =
      traj.has_rho() ? traj.rho : time_derivative(t, traj.phi);

  StabilityReport r;
  std::vector<double> h1(m);
  for (std::size_t i = 0; i < m; ++i) {
    h1[i] = norm_squared(traj.phi[i], NormKind::Vstar) + norm_squared(dphi[i], NormKind::Vstar);
    r.phi_LinfW = std::max(r.phi_LinfW, norm(traj.phi[i], NormKind::W));
    r.mu_LinfWstar = std::max(r.mu_LinfWstar, norm(chem[i].mu, NormKind::Wstar));
    r.w_LinfH = std::max(r.w_LinfH, norm(chem[i].w, NormKind::H));
  }
  const auto idx = all_indices(m);
  r.phi_H1Vstar = l2_time(t, h1, idx);

  if (tau > 0.0) {
    const std::vector<SpectralField> ddphi = time_derivative(t, dphi);
    std::vector<double> z(m);
    double vmax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      z[i] = norm_squared(ddphi[i], NormKind::Zstar);
      vmax = std::max(vmax, norm(dphi[i], NormKind::Vstar));
    }
    r.tau_dtt_L2Zstar = tau * l2_time(t, z, idx);
    r.sqrt_tau_dt_LinfVstar = std::sqrt(tau) * vmax;
  }
  return r;
}

ErrorReport error_report(const Trajectory& traj_tau, const Trajectory& traj_ref,
                         const GalerkinSystem& system) {
  return error_on(traj_tau, traj_ref, system, all_indices(traj_tau.size()));
}

ErrorReport error_report_subsampled(const Trajectory& traj_tau, const Trajectory& traj_ref,
                                    const GalerkinSystem& system, std::size_t stride) {
  if (stride == 0) throw ArgumentError("error_report: stride must be positive");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < traj_tau.size(); i += stride) idx.push_back(i);
  if (!traj_tau.times.empty() && idx.back() + 1 != traj_tau.size())
    idx.push_back(traj_tau.size() - 1);
  return error_on(traj_tau, traj_ref, system, idx);
}

RateFit rate_fit(std::span<const RatePoint> points) {
  if (points.size() < 3) throw ArgumentError("rate_fit: need at least 3 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& p = points[i];
    if (!(p.error > 0.0) || !std::isfinite(p.error))
      throw ArgumentError("rate_fit: errors must be positive and finite");
    if (!(p.tau > 0.0)) throw ArgumentError("rate_fit: tau must be positive");
    if (i > 0 && !(p.tau < points[i - 1].tau))
      throw ArgumentError("rate_fit: tau must be strictly decreasing");
  }
  const double n = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& p : points) {
    sx += std::log(p.tau);
    sy += std::log(p.error);
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(p.tau) - mx;
    const double dy = std::log(p.error) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (const auto& p : points) {
    const double e = std::log(p.error) - (fit.intercept + fit.slope * std::log(p.tau));
    ss_res += e * e;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.points.assign(points.begin(), points.end());
  return fit;
}

// ------------------------------------------------------------ scalar oracles

DampedScalarOde::DampedScalarOde(double tau, double stiffness, double forcing, double c0,
                                 double c1, double horizon)
    : tau_(tau), a_(stiffness), g_(forcing), c0_(c0), c1_(c1), horizon_(horizon) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ArgumentError("scalar oracle: tau must be >= 0");
  if (!std::isfinite(stiffness) || !std::isfinite(forcing) || !std::isfinite(c0) ||
      !std::isfinite(c1))
    throw ArgumentError("scalar oracle: non-finite coefficient");
}

namespace {

// e^{alpha t} C(t) and e^{alpha t} S(t) for the homogeneous damped
// oscillator, with sign = -1 (underdamped), 0 (critical), +1 (overdamped).
struct Kernel {
  double ec, es;
};

Kernel kernel(double alpha, double beta, int sign, double t) {
  if (sign < 0) {
    const double e = std::exp(alpha * t);
    return {e * std::cos(beta * t), e * std::sin(beta * t) / beta};
  }
  if (sign == 0) {
    const double e = std::exp(alpha * t);
    return {e, e * t};
  }
  const double ep = std::exp((alpha + beta) * t);
  const double em = std::exp((alpha - beta) * t);
  const double es = 2.0 * beta * t > 700.0 ? ep / (2.0 * beta)
                                           : em * std::expm1(2.0 * beta * t) / (2.0 * beta);
  return {0.5 * (ep + em), es};
}

}  // namespace

double DampedScalarOde::operator()(double t) const {
  if (t < 0.0 || (horizon_ > 0.0 && t > horizon_ * (1.0 + 1e-12)))
    throw ArgumentError("scalar oracle: time outside the evaluation window");
  if (tau_ == 0.0) {
    if (a_ == 0.0) return c0_ + g_ * t;
    const double eq = g_ / a_;
    return eq + (c0_ - eq) * std::exp(-a_ * t);
  }
  if (a_ == 0.0) {
    // tau u'' + u' = 0 for u = c - g t
    const double u1 = c1_ - g_;
    return c0_ + g_ * t - u1 * tau_ * std::expm1(-t / tau_);
  }
  const double eq = g_ / a_;
  const double u0 = c0_ - eq;
  const double alpha = -0.5 / tau_;
  const double disc = 1.0 - 4.0 * tau_ * a_;
  const int sign = disc > 0.0 ? 1 : (disc < 0.0 ? -1 : 0);
  const double beta = std::sqrt(std::abs(disc)) / (2.0 * tau_);
  const Kernel k = kernel(alpha, beta, sign, t);
  return eq + u0 * k.ec + (c1_ - alpha * u0) * k.es;
}

double DampedScalarOde::derivative(double t) const {
  if (t < 0.0 || (horizon_ > 0.0 && t > horizon_ * (1.0 + 1e-12)))
    throw ArgumentError("scalar oracle: time outside the evaluation window");
  if (tau_ == 0.0) {
    if (a_ == 0.0) return g_;
    const double eq = g_ / a_;
    return -a_ * (c0_ - eq) * std::exp(-a_ * t);
  }
  if (a_ == 0.0) return g_ + (c1_ - g_) * std::exp(-t / tau_);
  const double eq = g_ / a_;
  const double u0 = c0_ - eq;
  const double alpha = -0.5 / tau_;
  const double disc = 1.0 - 4.0 * tau_ * a_;
  const int sign = disc > 0.0 ? 1 : (disc < 0.0 ? -1 : 0);
  const double beta = std::sqrt(std::abs(disc)) / (2.0 * tau_);
  const Kernel k = kernel(alpha, beta, sign, t);
  const double u = u0 * k.ec + (c1_ - alpha * u0) * k.es;
  // C' = sign beta^2 S, S' = C
  return alpha * u + u0 * sign * beta * beta * k.es + (c1_ - alpha * u0) * k.ec;
}

DampedScalarOde mean_ode_oracle(double tau, double sigma, double g_mean, double m0, double m1,
                                double T) {
  if (!(sigma > 0.0)) throw ArgumentError("mean_ode_oracle: sigma must be positive");
  return DampedScalarOde(tau, sigma, g_mean, m0, tau > 0.0 ? m1 : 0.0, T);
}

DampedScalarOde linear_mode_oracle(double lambda_k, const PotentialSpec& params, double tau,
                                   double phi0_k, double rho0_k, double g_k) {
  if (!params.beta_is_zero())
    throw ArgumentError("linear_mode_oracle: requires the beta = 0 diagnostic potential");
  const double lam = params.lambda();
  const double a =
      params.sigma() + lambda_k * (lambda_k - lam) * (lambda_k + params.nu() - lam);
  return DampedScalarOde(tau, a, g_k, phi0_k, tau > 0.0 ? rho0_k : 0.0);
}

// ---------------------------------------------------- manufactured solutions

double TimeProfile::value(double t) const {
  switch (kind) {
    case Kind::constant: return 1.0;
    case Kind::exponential: return std::exp(rate * t);
    case Kind::cosine: return std::cos(rate * t);
  }
  return 0.0;
}

double TimeProfile::d1(double t) const {
  switch (kind) {
    case Kind::constant: return 0.0;
    case Kind::exponential: return rate * std::exp(rate * t);
    case Kind::cosine: return -rate * std::sin(rate * t);
  }
  return 0.0;
}

double TimeProfile::d2(double t) const {
  switch (kind) {
    case Kind::constant: return 0.0;
    case Kind::exponential: return rate * rate * std::exp(rate * t);
    case Kind::cosine: return -rate * rate * std::cos(rate * t);
  }
  return 0.0;
}

SpectralField ManufacturedSolution::eval(double t, const DomainSpec& d, int order) const {
  if (order < 0 || order > 2) throw ArgumentError("manufactured solution: order must be 0..2");
  SpectralField out(d);
  for (const auto& term : terms) {
    require_same_space(out, term.profile, "manufactured solution");
    const double theta = order == 0   ? term.time.value(t)
                         : order == 1 ? term.time.d1(t)
                                      : term.time.d2(t);
    for (std::size_t k = 0; k < out.coeffs.size(); ++k)
      out.coeffs[k] += theta * term.profile.coeffs[k];
  }
  return out;
}

ForcingSpec mms_forcing(const ManufacturedSolution& phi_star, const GalerkinSystem& system,
                        double tau) {
  if (!(tau >= 0.0)) throw ArgumentError("mms_forcing: tau must be >= 0");
  for (const auto& term : phi_star.terms) {
    if (!term.profile.domain.same_space(system.domain()))
      throw ShapeError("mms_forcing: profile does not match the system modes");
    const SpectralField kept = system.truncate(term.profile);
    for (std::size_t k = 0; k < kept.coeffs.size(); ++k)
      if (kept.coeffs[k] != term.profile.coeffs[k])
        throw ArgumentError("mms_forcing: manufactured solution exceeds the retained band");
  }
  if (phi_star.terms.empty()) return ForcingSpec::zero();

  auto sys = std::make_shared<const GalerkinSystem>(system);
  auto fn = [sys, phi_star, tau](double t) {
    const DomainSpec& d = sys->domain();
    const SpectralField p = phi_star.eval(t, d, 0);
    const SpectralField mu = sys->compute_mu(p);
    SpectralField g = phi_star.eval(t, d, 1);
    if (tau > 0.0) g += tau * phi_star.eval(t, d, 2);
    const auto& eig = sys->eigenvalues();
    const double sigma = sys->potential().sigma();
    for (std::size_t k = 0; k < g.coeffs.size(); ++k)
      g.coeffs[k] += sigma * p.coeffs[k] + eig[k] * mu.coeffs[k];
    return g;
  };
  return ForcingSpec(CallableForcing{std::move(fn), "manufactured"});
}

double mu_time_integral_monitor(const Trajectory& traj, const GalerkinSystem& system) {
  if (traj.size() < 2) throw ArgumentError("mu_time_integral_monitor: need at least 2 samples");
  const auto& chem = traj.chemical(system);
  SpectralField acc(system.domain());
  double best = 0.0;
  for (std::size_t i = 1; i < traj.size(); ++i) {
    const double h = 0.5 * (traj.times[i] - traj.times[i - 1]);
    for (std::size_t k = 0; k < acc.coeffs.size(); ++k)
      acc.coeffs[k] += h * (chem[i].mu.coeffs[k] + chem[i - 1].mu.coeffs[k]);
    best = std::max(best, norm(acc, NormKind::V));
  }
  return best;
}

// ------------------------------------------------------------------ tau sweep

SweepResult run_tau_sweep(const SweepSetup& setup, const GalerkinSystem& system) {
  if (setup.taus.size() < 3) throw ArgumentError("sweep: need at least 3 tau values");
  for (std::size_t i = 0; i < setup.taus.size(); ++i) {
    if (!(setup.taus[i] > 0.0)) throw ArgumentError("sweep: tau values must be positive");
    if (i > 0 && !(setup.taus[i] < setup.taus[i - 1]))
      throw ArgumentError("sweep: tau list must be strictly decreasing");
  }
  if (scheme_is_hyperbolic(setup.reference_scheme))
    throw ArgumentError("sweep: the reference scheme must be parabolic");

  SweepResult result;
  const Trajectory ref =
      run(system, init_state(setup.phi0, std::nullopt, 0.0, system),
          StepConfig{setup.reference_dt, setup.reference_scheme, true}, setup.T, setup.save_every,
          false);
  ref.chemical(system);  // fill the cache before workers share it
  result.reference_stability = stability_report(ref, 0.0, system);
  result.reference_mu_integral = mu_time_integral_monitor(ref, system);
  result.reference_error_estimate.fill(std::numeric_limits<double>::quiet_NaN());
  const double coarse_stride = setup.save_every / (2.0 * setup.reference_dt);
  if (std::abs(coarse_stride - std::round(coarse_stride)) < 1e-9 * std::max(1.0, coarse_stride) &&
      coarse_stride >= 1.0) {
    const Trajectory coarse =
        run(system, init_state(setup.phi0, std::nullopt, 0.0, system),
            StepConfig{2.0 * setup.reference_dt, setup.reference_scheme, true}, setup.T,
            setup.save_every, false);
    const auto diff = error_report(coarse, ref, system).values();
    const double factor = std::pow(2.0, scheme_order(setup.reference_scheme)) - 1.0;
    for (std::size_t f = 0; f < 4; ++f) result.reference_error_estimate[f] = diff[f] / factor;
  }

  result.entries.resize(setup.taus.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < setup.taus.size(); i = next++) {
      try {
        const double tau = setup.taus[i];
        const Trajectory tr =
            run(system, init_state(setup.phi0, setup.rho0, tau, system),
                StepConfig{setup.dt, Scheme::imex1_hyperbolic, true}, setup.T, setup.save_every,
                false);
        SweepEntry& e = result.entries[i];
        e.tau = tau;
        e.errors = error_report(tr, ref, system);
        e.errors_half_rate = error_report_subsampled(tr, ref, system, 2);
        e.stability = stability_report(tr, tau, system);
        e.mu_integral = mu_time_integral_monitor(tr, system);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int jobs = std::clamp(setup.jobs, 1, static_cast<int>(setup.taus.size()));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& e : result.entries) {
    const auto full = e.errors.values();
    const auto half = e.errors_half_rate.values();
    for (std::size_t f = 0; f < 4; ++f)
      if (full[f] > 0.0)
        result.quadrature_rel_change =
            std::max(result.quadrature_rel_change, std::abs(full[f] - half[f]) / full[f]);
  }
  for (std::size_t f = 0; f < 4; ++f) {
    std::vector<RatePoint> pts;
    for (const auto& e : result.entries) pts.push_back({e.tau, e.errors.values()[f]});
    result.fits[f] = rate_fit(pts);
  }
  return result;
}

}  // namespace hyperch
