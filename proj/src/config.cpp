// config.cpp

#include "hyperch/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "hyperch/error.hpp"

namespace hyperch {

int SourceLines::line(const std::string& key) const {
  const auto it = at.find(key);
  return it == at.end() ? -1 : it->second;
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().is_null() ? -1 : n.Mark().line; }

template <class T>
T as(const YAML::Node& n, const std::string& field, const char* expected) {
  if (!n.IsScalar()) throw ConfigError(field, line_of(n), std::string("expected ") + expected);
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError(field, line_of(n), std::string("expected ") + expected + ", got '" +
                                             n.Scalar() + "'");
  }
}

template <class T>
std::vector<T> as_list(const YAML::Node& n, const std::string& field, const char* expected) {
  if (!n.IsSequence()) throw ConfigError(field, line_of(n), "expected a list");
  std::vector<T> out;
  for (std::size_t i = 0; i < n.size(); ++i)
    out.push_back(as<T>(n[i], field + "[" + std::to_string(i) + "]", expected));
  return out;
}

void check_keys(const YAML::Node& map, const std::string& where,
                const std::set<std::string>& allowed) {
  if (!map.IsMap()) throw ConfigError(where, line_of(map), "expected a mapping");
  for (const auto& kv : map) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key))
      throw ConfigError(where.empty() ? key : where + "." + key, line_of(kv.first),
                        "unknown key");
  }
}

bool is_multiple(double a, double b) {
  const double r = a / b;
  return std::abs(r - std::round(r)) <= 1e-9 * std::max(1.0, r);
}

InitialData parse_initial(const YAML::Node& n, const std::string& field) {
  InitialData d;
  if (n.IsScalar()) {
    if (n.Scalar() != "zero") throw ConfigError(field, line_of(n), "expected 'zero' or a mapping");
    return d;
  }
  check_keys(n, field, {"cosines", "coefficients", "random"});
  if (n.size() != 1)
    throw ConfigError(field, line_of(n), "give exactly one of cosines, coefficients, random");
  if (const auto c = n["cosines"]) {
    d.kind = InitialData::Kind::cosines;
    if (!c.IsSequence()) throw ConfigError(field + ".cosines", line_of(c), "expected a list");
    for (std::size_t i = 0; i < c.size(); ++i) {
      const std::string f = field + ".cosines[" + std::to_string(i) + "]";
      check_keys(c[i], f, {"k", "amplitude"});
      if (!c[i]["k"] || !c[i]["amplitude"])
        throw ConfigError(f, line_of(c[i]), "needs k and amplitude");
      const auto k = as_list<int>(c[i]["k"], f + ".k", "an integer");
      if (k.empty() || k.size() > 2) throw ConfigError(f + ".k", line_of(c[i]["k"]), "1 or 2 indices");
      InitialData::Cosine term;
      term.k = {k[0], k.size() > 1 ? k[1] : 0};
      term.amplitude = as<double>(c[i]["amplitude"], f + ".amplitude", "a number");
      d.cosines.push_back(term);
    }
  } else if (const auto c = n["coefficients"]) {
    d.kind = InitialData::Kind::coefficients;
    d.coefficients = as_list<double>(c, field + ".coefficients", "a number");
  } else {
    const auto r = n["random"];
    d.kind = InitialData::Kind::random;
    check_keys(r, field + ".random", {"amplitude", "decay"});
    if (r["amplitude"]) d.amplitude = as<double>(r["amplitude"], field + ".random.amplitude", "a number");
    if (r["decay"]) d.decay = as<double>(r["decay"], field + ".random.decay", "a number");
  }
  return d;
}

void emit_initial(YAML::Emitter& out, const InitialData& d) {
  switch (d.kind) {
    case InitialData::Kind::zero:
      out << "zero";
      return;
    case InitialData::Kind::cosines:
      out << YAML::BeginMap << YAML::Key << "cosines" << YAML::Value << YAML::BeginSeq;
      for (const auto& c : d.cosines) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "k" << YAML::Value << YAML::Flow
            << YAML::BeginSeq << c.k[0] << c.k[1] << YAML::EndSeq << YAML::Key << "amplitude"
            << YAML::Value << c.amplitude << YAML::EndMap;
      }
      out << YAML::EndSeq << YAML::EndMap;
      return;
    case InitialData::Kind::coefficients:
      out << YAML::BeginMap << YAML::Key << "coefficients" << YAML::Value << YAML::Flow
          << d.coefficients << YAML::EndMap;
      return;
    case InitialData::Kind::random:
      out << YAML::BeginMap << YAML::Key << "random" << YAML::Value << YAML::Flow
          << YAML::BeginMap << YAML::Key << "amplitude" << YAML::Value << d.amplitude
          << YAML::Key << "decay" << YAML::Value << d.decay << YAML::EndMap << YAML::EndMap;
      return;
  }
}

std::vector<int> pad(std::vector<int> v, int dim, int fill) {
  v.resize(static_cast<std::size_t>(dim), fill);
  return v;
}

void validate(ExperimentConfig& cfg) {
  const auto& L = cfg.lines;
  DomainSpec d;
  try {
    d = build_domain(cfg);
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("domain", L.line("domain"), e.what());
  }
  try {
    GalerkinSystem(d, build_potential(cfg), ForcingSpec::zero(),
                   {cfg.domain.retained[0], cfg.domain.dim == 2 ? cfg.domain.retained[1] : 0});
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("potential", L.line("potential"), e.what());
  }

  if (cfg.tau && !(*cfg.tau >= 0.0)) throw ConfigError("tau", L.line("tau"), "must be >= 0");
  if (!cfg.tau_list.empty()) {
    if (cfg.tau_list.size() < 3)
      throw ConfigError("tau_list", L.line("tau_list"), "needs at least 3 entries");
    std::set<double> seen;
    for (std::size_t i = 0; i < cfg.tau_list.size(); ++i) {
      const double t = cfg.tau_list[i];
      if (!(t > 0.0)) throw ConfigError("tau_list", L.line("tau_list"), "entries must be > 0");
      if (!seen.insert(t).second)
        throw ConfigError("tau_list", L.line("tau_list"),
                          "duplicate entry " + std::to_string(t));
      if (i > 0 && !(t < cfg.tau_list[i - 1]))
        throw ConfigError("tau_list", L.line("tau_list"), "must be strictly decreasing");
    }
  }
  if (!(cfg.dt > 0.0)) throw ConfigError("dt", L.line("dt"), "must be > 0");
  if (!(cfg.T >= 0.0)) throw ConfigError("T", L.line("T"), "must be >= 0");
  if (!is_multiple(cfg.T, cfg.dt)) throw ConfigError("T", L.line("T"), "must be a multiple of dt");
  if (cfg.save_every > 0.0 && !is_multiple(cfg.save_every, cfg.dt))
    throw ConfigError("save_every", L.line("save_every"), "must be a multiple of dt");
  if (!(cfg.reference.dt > 0.0))
    throw ConfigError("reference.dt", L.line("reference"), "must be > 0");
  if (scheme_is_hyperbolic(cfg.reference.scheme))
    throw ConfigError("reference.scheme", L.line("reference"), "must be a parabolic scheme");
  if (cfg.tau && (*cfg.tau > 0.0) != scheme_is_hyperbolic(cfg.scheme))
    throw ConfigError("scheme", L.line("scheme"),
                      std::string(to_string(cfg.scheme)) + " does not match tau");
  if (cfg.tau && *cfg.tau == 0.0 && cfg.rho0.kind != InitialData::Kind::zero)
    throw ConfigError("rho0", L.line("rho0"), "tau = 0 takes no initial velocity");

  for (const auto* key : {"phi0", "rho0"}) {
    const InitialData& data = std::string(key) == "phi0" ? cfg.phi0 : cfg.rho0;
    try {
      build_initial(data, d, cfg.seed, 0);
    } catch (const Error& e) {
      throw ConfigError(key, L.line(key), e.what());
    }
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("<document>", e.mark.line, e.msg);
  }
  ExperimentConfig cfg;
  if (root.IsNull()) throw ConfigError("<document>", -1, "empty configuration");
  check_keys(root, "",
             {"domain", "potential", "tau", "tau_list", "scheme", "dt", "T", "save_every",
              "reference", "phi0", "rho0", "forcing", "output", "tag", "seed"});
  for (const auto& kv : root) cfg.lines.at[kv.first.as<std::string>()] = line_of(kv.first);

  if (const auto n = root["domain"]) {
    check_keys(n, "domain", {"dim", "lengths", "modes", "grid", "retained", "dealias"});
    auto& d = cfg.domain;
    if (n["dim"]) d.dim = as<int>(n["dim"], "domain.dim", "an integer");
    if (d.dim != 1 && d.dim != 2) throw ConfigError("domain.dim", line_of(n["dim"]), "must be 1 or 2");
    if (n["lengths"]) d.lengths = as_list<double>(n["lengths"], "domain.lengths", "a number");
    if (n["modes"]) d.modes = as_list<int>(n["modes"], "domain.modes", "an integer");
    d.grid = n["grid"] ? as_list<int>(n["grid"], "domain.grid", "an integer") : std::vector<int>{};
    d.retained = n["retained"] ? as_list<int>(n["retained"], "domain.retained", "an integer")
                               : std::vector<int>{};
    if (n["dealias"]) d.dealias = as<bool>(n["dealias"], "domain.dealias", "true or false");
    const auto dim = static_cast<std::size_t>(d.dim);
    if (d.lengths.size() != dim)
      throw ConfigError("domain.lengths", line_of(n), "needs one entry per dimension");
    if (d.modes.size() != dim)
      throw ConfigError("domain.modes", line_of(n), "needs one entry per dimension");
    if (!d.grid.empty() && d.grid.size() != dim)
      throw ConfigError("domain.grid", line_of(n["grid"]), "needs one entry per dimension");
    if (!d.retained.empty() && d.retained.size() != dim)
      throw ConfigError("domain.retained", line_of(n["retained"]), "needs one entry per dimension");
    d.grid = pad(d.grid, d.dim, 0);
    d.retained = pad(d.retained, d.dim, 0);
  }
  if (const auto n = root["potential"]) {
    check_keys(n, "potential", {"beta_coeffs", "lambda", "nu", "sigma", "mode"});
    auto& p = cfg.potential;
    if (const auto b = n["beta_coeffs"]) {
      if (!b.IsSequence())
        throw ConfigError("potential.beta_coeffs", line_of(b), "expected a list of [degree, coefficient]");
      p.beta_coeffs.clear();
      for (std::size_t i = 0; i < b.size(); ++i) {
        const std::string f = "potential.beta_coeffs[" + std::to_string(i) + "]";
        if (!b[i].IsSequence() || b[i].size() != 2)
          throw ConfigError(f, line_of(b[i]), "expected [degree, coefficient]");
        p.beta_coeffs.push_back({as<int>(b[i][0], f, "an integer degree"),
                                 as<double>(b[i][1], f, "a number")});
      }
    }
    if (n["lambda"]) p.lambda = as<double>(n["lambda"], "potential.lambda", "a number");
    if (n["nu"]) p.nu = as<double>(n["nu"], "potential.nu", "a number");
    if (n["sigma"]) p.sigma = as<double>(n["sigma"], "potential.sigma", "a number");
    if (n["mode"]) {
      const auto m = as<std::string>(n["mode"], "potential.mode", "strict or diagnostic");
      if (m != "strict" && m != "diagnostic")
        throw ConfigError("potential.mode", line_of(n["mode"]), "expected strict or diagnostic");
      p.diagnostic = m == "diagnostic";
    }
  }
  if (const auto n = root["tau"]) cfg.tau = as<double>(n, "tau", "a number");
  if (const auto n = root["tau_list"]) cfg.tau_list = as_list<double>(n, "tau_list", "a number");
  auto scheme_of = [](const YAML::Node& n, const std::string& field) {
    try {
      return scheme_from_string(as<std::string>(n, field, "a scheme name"));
    } catch (const ArgumentError& e) {
      throw ConfigError(field, line_of(n), e.what());
    }
  };
  if (const auto n = root["scheme"]) cfg.scheme = scheme_of(n, "scheme");
  if (const auto n = root["dt"]) cfg.dt = as<double>(n, "dt", "a number");
  if (const auto n = root["T"]) cfg.T = as<double>(n, "T", "a number");
  if (const auto n = root["save_every"]) cfg.save_every = as<double>(n, "save_every", "a number");
  if (const auto n = root["reference"]) {
    check_keys(n, "reference", {"scheme", "dt"});
    if (n["scheme"]) cfg.reference.scheme = scheme_of(n["scheme"], "reference.scheme");
    if (n["dt"]) cfg.reference.dt = as<double>(n["dt"], "reference.dt", "a number");
  }
  if (const auto n = root["phi0"]) cfg.phi0 = parse_initial(n, "phi0");
  if (const auto n = root["rho0"]) cfg.rho0 = parse_initial(n, "rho0");
  if (const auto n = root["forcing"]) {
    if (n.IsScalar() && n.Scalar() == "zero") {
      cfg.forcing = {};
    } else if (n.IsMap()) {
      check_keys(n, "forcing", {"constant"});
      cfg.forcing.kind = ForcingConfig::Kind::constant;
      cfg.forcing.value = as<double>(n["constant"], "forcing.constant", "a number");
    } else {
      throw ConfigError("forcing", line_of(n), "expected 'zero' or {constant: value}");
    }
  }
  if (const auto n = root["output"]) cfg.output = as<std::string>(n, "output", "a path");
  if (const auto n = root["tag"]) cfg.tag = as<std::string>(n, "tag", "a string");
  if (const auto n = root["seed"]) cfg.seed = as<std::uint64_t>(n, "seed", "a nonnegative integer");

  validate(cfg);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path.string(), "cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  const auto& d = cfg.domain;
  out << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "dim" << YAML::Value << d.dim;
  out << YAML::Key << "lengths" << YAML::Value << YAML::Flow << d.lengths;
  out << YAML::Key << "modes" << YAML::Value << YAML::Flow << d.modes;
  out << YAML::Key << "grid" << YAML::Value << YAML::Flow << d.grid;
  out << YAML::Key << "retained" << YAML::Value << YAML::Flow << d.retained;
  out << YAML::Key << "dealias" << YAML::Value << d.dealias;
  out << YAML::EndMap;
  const auto& p = cfg.potential;
  out << YAML::Key << "potential" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "beta_coeffs" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& t : p.beta_coeffs)
    out << YAML::Flow << YAML::BeginSeq << t.degree << t.coeff << YAML::EndSeq;
  out << YAML::EndSeq;
  out << YAML::Key << "lambda" << YAML::Value << p.lambda;
  out << YAML::Key << "nu" << YAML::Value << p.nu;
  out << YAML::Key << "sigma" << YAML::Value << p.sigma;
  out << YAML::Key << "mode" << YAML::Value << (p.diagnostic ? "diagnostic" : "strict");
  out << YAML::EndMap;
  if (cfg.tau) out << YAML::Key << "tau" << YAML::Value << *cfg.tau;
  if (!cfg.tau_list.empty())
    out << YAML::Key << "tau_list" << YAML::Value << YAML::Flow << cfg.tau_list;
  out << YAML::Key << "scheme" << YAML::Value << std::string(to_string(cfg.scheme));
  out << YAML::Key << "dt" << YAML::Value << cfg.dt;
  out << YAML::Key << "T" << YAML::Value << cfg.T;
  out << YAML::Key << "save_every" << YAML::Value << cfg.save_every;
  out << YAML::Key << "reference" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "scheme" << YAML::Value << std::string(to_string(cfg.reference.scheme));
  out << YAML::Key << "dt" << YAML::Value << cfg.reference.dt;
  out << YAML::EndMap;
  out << YAML::Key << "phi0" << YAML::Value;
  emit_initial(out, cfg.phi0);
  out << YAML::Key << "rho0" << YAML::Value;
  emit_initial(out, cfg.rho0);
  out << YAML::Key << "forcing" << YAML::Value;
  if (cfg.forcing.kind == ForcingConfig::Kind::zero)
    out << "zero";
  else
    out << YAML::Flow << YAML::BeginMap << YAML::Key << "constant" << YAML::Value
        << cfg.forcing.value << YAML::EndMap;
  out << YAML::Key << "output" << YAML::Value << YAML::DoubleQuoted << cfg.output;
  out << YAML::Key << "tag" << YAML::Value << YAML::DoubleQuoted << cfg.tag;
  out << YAML::Key << "seed" << YAML::Value << cfg.seed;
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

DomainSpec build_domain(const ExperimentConfig& cfg) {
  const auto& d = cfg.domain;
  const auto grid = pad(d.grid, 2, 0);
  DomainSpec out = d.dim == 1
                       ? DomainSpec::interval(d.lengths.at(0), d.modes.at(0), d.dealias, grid[0])
                       : DomainSpec::box(d.lengths.at(0), d.lengths.at(1), d.modes.at(0),
                                         d.modes.at(1), d.dealias, grid[0], grid[1]);
  out.validate();
  return out;
}

PotentialSpec build_potential(const ExperimentConfig& cfg) {
  const auto& p = cfg.potential;
  return PotentialSpec(p.beta_coeffs, p.lambda, p.nu, p.sigma,
                       p.diagnostic ? PotentialSpec::Mode::diagnostic : PotentialSpec::Mode::strict);
}

ForcingSpec build_forcing(const ExperimentConfig& cfg) {
  if (cfg.forcing.kind == ForcingConfig::Kind::constant)
    return ForcingSpec::constant(cfg.forcing.value);
  return ForcingSpec::zero();
}

GalerkinSystem build_system(const ExperimentConfig& cfg) {
  const auto r = pad(cfg.domain.retained, 2, 0);
  return GalerkinSystem(build_domain(cfg), build_potential(cfg), build_forcing(cfg), {r[0], r[1]});
}

SpectralField build_initial(const InitialData& data, const DomainSpec& d, std::uint64_t seed,
                            std::uint64_t stream) {
  SpectralField out(d);
  switch (data.kind) {
    case InitialData::Kind::zero:
      break;
    case InitialData::Kind::cosines:
      for (const auto& c : data.cosines) out += SpectralField::cosine(d, c.k, c.amplitude);
      break;
    case InitialData::Kind::coefficients:
      if (data.coefficients.size() != d.mode_count())
        throw ArgumentError("expected " + std::to_string(d.mode_count()) + " coefficients, got " +
                            std::to_string(data.coefficients.size()));
      out.coeffs = data.coefficients;
      break;
    case InitialData::Kind::random: {
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(stream)};
      std::mt19937_64 rng(seq);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (std::size_t k = 0; k < out.coeffs.size(); ++k)
        out.coeffs[k] = data.amplitude * u(rng) / std::pow(1.0 + d.eigenvalue(k), data.decay);
      break;
    }
  }
  if (!out.all_finite()) throw ArgumentError("non-finite initial data");
  return out;
}

}  // namespace hyperch
