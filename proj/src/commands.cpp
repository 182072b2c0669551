// commands.cpp

#include "hyperch/commands.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "hyperch/error.hpp"
#include "hyperch/io.hpp"
#include "hyperch/lab.hpp"
#include "hyperch/sobolev.hpp"

namespace fs = std::filesystem;

namespace hyperch {

namespace {

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(dir.string(), "cannot create directory: " + ec.message());
}

}  // namespace

// ------------------------------------------------------------------ simulate

int simulate(const ExperimentConfig& cfg, const fs::path& out_dir, std::ostream& out,
             std::ostream& err) {
  try {
    if (!cfg.tau) throw ConfigError("tau", -1, "simulate needs a single tau");
    const double tau = *cfg.tau;
    const GalerkinSystem system = build_system(cfg);
    const DomainSpec& d = system.domain();
    const SpectralField phi0 = build_initial(cfg.phi0, d, cfg.seed, 0);
    std::optional<SpectralField> rho0;
    if (tau > 0.0) rho0 = build_initial(cfg.rho0, d, cfg.seed, 1);

    ensure_dir(out_dir);
    const Trajectory traj = run(system, init_state(phi0, rho0, tau, system),
                                StepConfig{cfg.dt, cfg.scheme, true}, cfg.T, cfg.save_every);

    std::vector<std::string> files;
    const std::string traj_name = "trajectory_" + cfg.tag + ".csv";
    write_trajectory_csv(out_dir / traj_name, traj, cfg.tag, d);
    files.push_back(traj_name);
    write_monitors_csv(out_dir / "monitors.csv", traj);
    files.push_back("monitors.csv");
    if (traj.size() >= 2) {
      write_stability_json(out_dir / "stability.json", stability_report(traj, tau, system), tau,
                           mu_time_integral_monitor(traj, system));
      files.push_back("stability.json");
    }
    write_manifest(out_dir, "simulate", cfg, files);
    out << "simulate: " << traj.size() << " samples to " << out_dir.string() << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

// ----------------------------------------------------------------- sweep-tau

int sweep_tau(const ExperimentConfig& cfg, const fs::path& out_dir, int jobs, std::ostream& out,
              std::ostream& err) {
  try {
    if (cfg.tau_list.size() < 3) throw ConfigError("tau_list", -1, "sweep-tau needs at least 3 entries");
    if (cfg.scheme != Scheme::imex1_hyperbolic)
      throw ConfigError("scheme", cfg.lines.line("scheme"),
                        "sweep-tau runs the relaxed problem; use imex1_hyperbolic");
    const GalerkinSystem system = build_system(cfg);
    const DomainSpec& d = system.domain();

    SweepSetup setup;
    setup.phi0 = build_initial(cfg.phi0, d, cfg.seed, 0);
    setup.rho0 = build_initial(cfg.rho0, d, cfg.seed, 1);
    setup.taus = cfg.tau_list;
    setup.T = cfg.T;
    setup.dt = cfg.dt;
    setup.reference_dt = cfg.reference.dt;
    setup.reference_scheme = cfg.reference.scheme;
    setup.save_every = cfg.save_every;
    setup.jobs = jobs;

    ensure_dir(out_dir);
    const SweepResult result = run_tau_sweep(setup, system);
    write_errors_csv(out_dir / "errors.csv", result.entries);
    write_ratefit_json(out_dir / "ratefit.json", result);
    write_manifest(out_dir, "sweep-tau", cfg, {"errors.csv", "ratefit.json"});

    out << "sweep-tau: " << result.entries.size() << " tau values to " << out_dir.string() << "\n";
    for (std::size_t f = 0; f < 4; ++f)
      out << "  " << ErrorReport::field_names[f] << ": slope " << result.fits[f].slope
          << ", r^2 " << result.fits[f].r_squared << "\n";
    return 0;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

// -------------------------------------------------------------------- verify

namespace {

// classical double well with sigma = 0, admitted in diagnostic mode only
PotentialSpec undamped_classical() {
  return PotentialSpec({{3, 1.0}}, 1.0, 1.0, 0.0, PotentialSpec::Mode::diagnostic);
}

struct VerifyContext {
  DomainSpec domain;
  PotentialSpec potential;
  bool fault;
};

using Check = std::function<CheckResult(const VerifyContext&)>;

std::string sci(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << x;
  return os.str();
}

CheckResult make(std::string name, bool ok, const std::string& detail) {
  return {std::move(name), ok, detail};
}

std::vector<SpectralField> random_fields(const DomainSpec& d, int count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<SpectralField> out;
  for (int i = 0; i < count; ++i) {
    SpectralField v(d);
    for (auto& c : v.coeffs) c = g(rng);
    out.push_back(v);
  }
  return out;
}

GalerkinSystem with_fault(GalerkinSystem s, bool fault) {
  s.inject_sign_fault(fault);
  return s;
}

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.coeffs.size(); ++k)
    m = std::max(m, std::abs(a.coeffs[k] - b.coeffs[k]));
  return m;
}

double max_abs(const SpectralField& a) {
  double m = 0.0;
  for (double c : a.coeffs) m = std::max(m, std::abs(c));
  return m;
}

const std::vector<std::pair<std::string, Check>>& checks() {
  static const std::vector<std::pair<std::string, Check>> list = {
      {"inverse_neumann_identities",
       [](const VerifyContext& c) {
         double worst = 0.0;
         const SpectralBasis basis(c.domain);
         const auto& eig = basis.eigenvalues();
         for (const auto& z : random_fields(c.domain, 100, 11)) {
           const SpectralField nz = inv_neumann(z);
           SpectralField centered = z;
           centered.coeffs[0] = 0.0;
           const double scale = std::max(1.0, max_abs(z));
           worst = std::max(worst, max_abs_diff(-1.0 * laplacian(nz), centered) / scale);
           worst = std::max(worst, std::abs(mean(nz)) / scale);
           double expect = 0.0;
           for (std::size_t k = 1; k < z.coeffs.size(); ++k)
             expect += z.coeffs[k] * z.coeffs[k] / eig[k];
           worst = std::max(worst, std::abs(pairing(z, nz) - expect) / std::max(1.0, expect));
         }
         return make("inverse_neumann_identities", worst <= 1e-12, "max rel dev " + sci(worst));
       }},
      {"laplacian_projection_commute",
       [](const VerifyContext& c) {
         double worst = 0.0;
         const MultiIndex n{std::max(1, c.domain.modes[0] / 2),
                            std::max(1, c.domain.modes[1] / 2)};
         for (const auto& v : random_fields(c.domain, 100, 12)) {
           const SpectralField a = laplacian(project(v, n));
           const SpectralField b = project(laplacian(v), n);
           worst = std::max(worst, max_abs_diff(a, b) / std::max(1.0, max_abs(b)));
         }
         return make("laplacian_projection_commute", worst <= 1e-12, "max rel dev " + sci(worst));
       }},
      {"transform_roundtrip",
       [](const VerifyContext& c) {
         const SpectralBasis basis(c.domain);
         double worst = 0.0;
         for (const auto& v : random_fields(c.domain, 20, 13))
           worst = std::max(worst, max_abs_diff(basis.forward(basis.inverse(v)), v));
         return make("transform_roundtrip", worst <= 1e-11, "max abs dev " + sci(worst));
       }},
      {"chemical_potential_is_energy_gradient",
       [](const VerifyContext& c) {
         const GalerkinSystem sys(c.domain, c.potential);
         auto fields = random_fields(c.domain, 4, 14);
         double worst = 0.0;
         for (std::size_t i = 0; i + 1 < fields.size(); i += 2) {
           SpectralField phi = fields[i];
           SpectralField dir = fields[i + 1];
           const auto& eig = sys.eigenvalues();
           for (std::size_t k = 0; k < phi.coeffs.size(); ++k) {
             phi.coeffs[k] *= 0.3 / std::pow(1.0 + eig[k], 2);
             dir.coeffs[k] *= 1.0 / std::pow(1.0 + eig[k], 2);
           }
           const double h = 1e-5;
           const double fd = (energy(phi + h * dir, sys.potential(), sys.basis()).total -
                              energy(phi - h * dir, sys.potential(), sys.basis()).total) /
                             (2.0 * h);
           const double exact = pairing(sys.compute_mu(phi), dir);
           worst = std::max(worst, std::abs(fd - exact) / std::max(1e-8, std::abs(exact)));
         }
         return make("chemical_potential_is_energy_gradient", worst <= 1e-6,
                     "max rel dev " + sci(worst));
       }},
      {"nonlinear_remainder_consistency",
       [](const VerifyContext& c) {
         const GalerkinSystem sys = with_fault(GalerkinSystem(c.domain, c.potential), c.fault);
         double worst = 0.0;
         for (auto phi : random_fields(c.domain, 10, 15)) {
           const auto& eig = sys.eigenvalues();
           for (std::size_t k = 0; k < phi.coeffs.size(); ++k)
             phi.coeffs[k] *= 0.3 / std::pow(1.0 + eig[k], 2);
           const SpectralField rhs = sys.rhs_first_equation(phi, 0.0);
           const SpectralField nl = sys.nonlinear_remainder(phi);
           SpectralField split = sys.forcing_at(0.0);
           for (std::size_t k = 0; k < split.coeffs.size(); ++k)
             split.coeffs[k] -= sys.linear_stiffness(k) * phi.coeffs[k] + nl.coeffs[k];
           worst = std::max(worst, max_abs_diff(rhs, split) / std::max(1.0, max_abs(rhs)));
         }
         return make("nonlinear_remainder_consistency", worst <= 1e-10,
                     "max rel dev " + sci(worst));
       }},
      {"linear_mode_oracle",
       [](const VerifyContext& c) {
         const auto d = DomainSpec::interval(2.0 * std::numbers::pi, 16);
         const auto pot = PotentialSpec::linear(1.0, 1.0, 0.1);
         const GalerkinSystem sys = with_fault(GalerkinSystem(d, pot), c.fault);
         const double tau = 0.05;
         SpectralField phi0(d), rho0(d);
         for (std::size_t k = 0; k < phi0.coeffs.size(); ++k)
           phi0.coeffs[k] = rho0.coeffs[k] = 0.01 / std::pow(1.0 + d.eigenvalue(k), 3);
         const Trajectory tr = run(sys, init_state(phi0, rho0, tau, sys),
                                   StepConfig{1e-4, Scheme::imex1_hyperbolic, true}, 0.2, 0.05,
                                   false);
         double worst = 0.0;
         for (std::size_t k = 0; k < phi0.coeffs.size(); ++k) {
           const auto oracle =
               linear_mode_oracle(d.eigenvalue(k), pot, tau, phi0.coeffs[k], rho0.coeffs[k], 0.0);
           for (std::size_t i = 0; i < tr.size(); ++i)
             worst = std::max(worst, std::abs(tr.phi[i].coeffs[k] - oracle(tr.times[i])));
         }
         return make("linear_mode_oracle", worst <= 1e-6, "max abs dev " + sci(worst));
       }},
      {"mean_channel_recursion",
       [](const VerifyContext& c) {
         const auto d = DomainSpec::interval(2.0 * std::numbers::pi, 8);
         const GalerkinSystem sys = with_fault(
             GalerkinSystem(d, PotentialSpec::classical(1.0, 0.5), ForcingSpec::constant(0.3)),
             c.fault);
         const double tau = 0.1, dt = 1e-3;
         const SpectralField phi0 =
             SpectralField::constant(d, 0.2) + SpectralField::cosine(d, {2, 0}, 0.1);
         SolverState s = init_state(phi0, std::nullopt, tau, sys);
         const StepConfig cfg{dt, Scheme::imex1_hyperbolic, true};
         const double g0 = sys.forcing_at(0.0).coeffs[0];
         double m = s.phi.coeffs[0], r = 0.0, worst = 0.0;
         for (int i = 0; i < 200; ++i) {
           s = step(s, cfg, sys);
           r = (tau * r + dt * (g0 - 0.0 - 0.5 * m)) / (tau + dt + 0.5 * dt * dt);
           m = m + dt * r;
           worst = std::max(worst, std::abs(s.phi.coeffs[0] - m));
         }
         return make("mean_channel_recursion", worst <= 1e-13, "max abs dev " + sci(worst));
       }},
      {"manufactured_solution_convergence",
       [](const VerifyContext& c) {
         const auto d = DomainSpec::interval(2.0 * std::numbers::pi, 16);
         const auto pot = PotentialSpec::classical();
         const double tau = 0.1, T = 1.0;
         ManufacturedSolution ms;
         ms.terms.push_back({SpectralField::cosine(d, {2, 0}, 0.1),
                             {TimeProfile::Kind::exponential, -1.0}});
         const GalerkinSystem base(d, pot);
         const GalerkinSystem sys =
             with_fault(GalerkinSystem(d, pot, mms_forcing(ms, base, tau)), c.fault);
         std::array<double, 2> err{};
         const std::array<double, 2> dts{1e-2, 5e-3};
         for (std::size_t i = 0; i < 2; ++i) {
           const Trajectory tr =
               run(sys, init_state(ms.eval(0, d), ms.eval(0, d, 1), tau, sys),
                   StepConfig{dts[i], Scheme::imex1_hyperbolic, true}, T, 0.0, false);
           err[i] = max_abs_diff(tr.phi.back(), ms.eval(T, d));
         }
         const double order = std::log2(err[0] / err[1]);
         const bool ok = std::isfinite(order) && std::abs(order - 1.0) <= 0.2 && err[1] < 1e-3;
         return make("manufactured_solution_convergence", ok,
                     "errors " + sci(err[0]) + ", " + sci(err[1]) + ", order " + sci(order));
       }},
      {"energy_dissipation",
       [](const VerifyContext& c) {
         const auto d = DomainSpec::interval(2.0 * std::numbers::pi, 32);
         const GalerkinSystem sys =
             with_fault(GalerkinSystem(d, undamped_classical()), c.fault);
         const SpectralField phi0 =
             SpectralField::cosine(d, {2, 0}, 0.2) + SpectralField::cosine(d, {4, 0}, 0.05);
         const Trajectory tr = run(sys, init_state(phi0, std::nullopt, 0.0, sys),
                                   StepConfig{1e-4, Scheme::imex1_parabolic, true}, 0.2, 1e-4);
         double worst = -1e300;
         for (std::size_t i = 1; i < tr.monitors.size(); ++i)
           worst = std::max(worst, tr.monitors[i].energy - tr.monitors[i - 1].energy);
         return make("energy_dissipation", worst <= 1e-8, "max step increase " + sci(worst));
       }},
      {"lyapunov_dissipation",
       [](const VerifyContext& c) {
         const auto d = DomainSpec::interval(2.0 * std::numbers::pi, 32);
         const GalerkinSystem sys =
             with_fault(GalerkinSystem(d, undamped_classical()), c.fault);
         const SpectralField phi0 =
             SpectralField::cosine(d, {2, 0}, 0.2) + SpectralField::cosine(d, {4, 0}, 0.05);
         const SpectralField rho0 = SpectralField::cosine(d, {2, 0}, 0.1);
         const Trajectory tr = run(sys, init_state(phi0, rho0, 0.05, sys),
                                   StepConfig{1e-4, Scheme::imex1_hyperbolic, true}, 0.2, 1e-4);
         double worst = -1e300;
         for (std::size_t i = 1; i < tr.monitors.size(); ++i)
           worst = std::max(worst, tr.monitors[i].lyapunov - tr.monitors[i - 1].lyapunov);
         return make("lyapunov_dissipation", worst <= 1e-8, "max step increase " + sci(worst));
       }},
      {"rate_fit_power_law",
       [](const VerifyContext&) {
         std::vector<RatePoint> pts;
         for (double t : {0.1, 0.01, 0.001, 0.0001}) pts.push_back({t, 2.0 * std::sqrt(t)});
         const RateFit fit = rate_fit(pts);
         const double dev = std::abs(fit.slope - 0.5);
         return make("rate_fit_power_law", dev <= 1e-12 && fit.r_squared > 1.0 - 1e-12,
                     "slope dev " + sci(dev));
       }},
      {"error_report_definiteness",
       [](const VerifyContext& c) {
         const auto d = DomainSpec::interval(2.0 * std::numbers::pi, 16);
         const GalerkinSystem sys = with_fault(GalerkinSystem(d, PotentialSpec::classical()), c.fault);
         const SpectralField phi0 = SpectralField::cosine(d, {2, 0}, 0.2);
         const Trajectory tr = run(sys, init_state(phi0, std::nullopt, 0.0, sys),
                                   StepConfig{1e-3, Scheme::imex1_parabolic, true}, 0.05, 1e-2,
                                   false);
         const auto v = error_report(tr, tr, sys).values();
         const double worst = *std::max_element(v.begin(), v.end());
         return make("error_report_definiteness", worst == 0.0, "max field " + sci(worst));
       }},
  };
  return list;
}

}  // namespace

std::vector<std::string> verify_check_names() {
  std::vector<std::string> names;
  for (const auto& [name, fn] : checks()) names.push_back(name);
  return names;
}

std::vector<CheckResult> run_verify(const VerifyOptions& opts) {
  VerifyContext ctx{DomainSpec::interval(2.0 * std::numbers::pi, 32), PotentialSpec::classical(),
                    opts.inject_sign_fault};
  if (opts.config) {
    ctx.domain = build_domain(*opts.config);
    ctx.potential = build_potential(*opts.config);
  }
  std::vector<CheckResult> results;
  for (const auto& [name, fn] : checks()) {
    try {
      results.push_back(fn(ctx));
    } catch (const Error& e) {
      results.push_back({name, false, std::string("raised: ") + e.what()});
    }
  }
  return results;
}

int verify(const VerifyOptions& opts, const std::optional<fs::path>& out_dir, std::ostream& out,
           std::ostream& err) {
  try {
    const auto results = run_verify(opts);
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    bool all = true;
    for (const auto& r : results) {
      out << (r.passed ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
      j.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
      all = all && r.passed;
    }
    if (out_dir) {
      ensure_dir(*out_dir);
      write_text(*out_dir / "verify.json", j.dump(2) + "\n");
    }
    return all ? 0 : 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

// -------------------------------------------------------------------- report

namespace {

struct LoadedDir {
  std::string label;
  std::string command;
  std::vector<ErrorRow> errors;
  nlohmann::json ratefit;
  nlohmann::json stability;
};

nlohmann::json read_json(const fs::path& p) {
  const std::string text = read_text(p);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw IoError(p.string(), std::string("corrupt JSON: ") + e.what());
  }
}

LoadedDir load_dir(const fs::path& dir) {
  const fs::path manifest = dir / "manifest.json";
  if (!fs::exists(manifest)) throw IoError(manifest.string(), "missing manifest");
  const auto m = read_json(manifest);
  LoadedDir out;
  out.label = dir.filename().empty() ? dir.parent_path().filename().string()
                                     : dir.filename().string();
  if (!m.contains("command") || !m["command"].is_string())
    throw IoError(manifest.string(), "corrupt manifest (no command)");
  out.command = m["command"].get<std::string>();
  if (out.command == "sweep-tau") {
    out.errors = read_errors_csv(dir / "errors.csv");
    out.ratefit = read_json(dir / "ratefit.json");
  } else if (out.command == "simulate") {
    if (fs::exists(dir / "stability.json")) out.stability = read_json(dir / "stability.json");
  } else {
    throw IoError(manifest.string(), "unknown command '" + out.command + "'");
  }
  return out;
}

std::string cell(double x) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(4) << x;
  return os.str();
}

}  // namespace

int report(const std::vector<fs::path>& dirs, const std::optional<fs::path>& out_dir,
           std::ostream& out, std::ostream& err) {
  try {
    if (dirs.empty()) throw ArgumentError("report: no result directory given");
    std::vector<LoadedDir> loaded;
    for (const auto& d : dirs) loaded.push_back(load_dir(d));

    std::ostringstream csv;
    std::vector<const LoadedDir*> sweeps, sims;
    for (const auto& l : loaded) (l.command == "sweep-tau" ? sweeps : sims).push_back(&l);

    if (!sweeps.empty()) {
      std::set<double, std::greater<>> taus;
      for (const auto* s : sweeps)
        for (const auto& r : s->errors) taus.insert(r.tau);
      std::vector<std::string> header{"tau"};
      for (const auto* s : sweeps)
        for (auto name : ErrorReport::field_names)
          header.push_back(sweeps.size() > 1 ? s->label + ":" + std::string(name)
                                             : std::string(name));
      for (std::size_t i = 0; i < header.size(); ++i)
        out << std::setw(i == 0 ? 12 : 16) << header[i] << (i + 1 < header.size() ? "" : "\n");
      for (std::size_t i = 0; i < header.size(); ++i)
        csv << header[i] << (i + 1 < header.size() ? "," : "\n");
      for (double tau : taus) {
        out << std::setw(12) << cell(tau);
        csv << format_number(tau);
        for (const auto* s : sweeps) {
          const auto it = std::find_if(s->errors.begin(), s->errors.end(),
                                       [&](const ErrorRow& r) { return r.tau == tau; });
          for (std::size_t f = 0; f < 4; ++f) {
            if (it == s->errors.end()) {
              out << std::setw(16) << "-";
              csv << ",";
            } else {
              out << std::setw(16) << cell(it->values[f]);
              csv << "," << format_number(it->values[f]);
            }
          }
        }
        out << "\n";
        csv << "\n";
      }
      for (const auto* s : sweeps) {
        out << "fitted rates (" << s->label << "):";
        for (auto name : ErrorReport::field_names) {
          const auto& f = s->ratefit["fits"][std::string(name)];
          if (f.is_object() && f["slope"].is_number())
            out << "  " << name << " " << std::fixed << std::setprecision(3)
                << f["slope"].get<double>() << " (r^2 " << f["r_squared"].get<double>() << ")"
                << std::defaultfloat;
        }
        out << "\n";
      }
    }
    if (!sims.empty()) {
      if (!sweeps.empty()) out << "\n";
      out << std::setw(24) << "field";
      for (const auto* s : sims) out << std::setw(18) << s->label;
      out << "\n";
      for (auto name : StabilityReport::field_names) {
        out << std::setw(24) << name;
        for (const auto* s : sims) {
          const auto& v = s->stability;
          if (v.is_object() && v.contains(std::string(name)) && v[std::string(name)].is_number())
            out << std::setw(18) << cell(v[std::string(name)].get<double>());
          else
            out << std::setw(18) << "-";
        }
        out << "\n";
      }
    }
    if (out_dir) {
      ensure_dir(*out_dir);
      if (!sweeps.empty()) write_text(*out_dir / "report.csv", csv.str());
    }
    return 0;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hyperch
