#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hyperch/config.hpp"
#include "hyperch/error.hpp"

using namespace hyperch;

namespace {

const char* kFull = R"(domain:
  dim: 2
  lengths: [1.5, 2.25]
  modes: [8, 6]
  retained: [6, 4]
  dealias: true
potential:
  beta_coeffs: [[3, 1], [5, 0.25]]
  lambda: 1.25
  nu: -0.5
  sigma: 0.3
tau: 0.1
scheme: imex1_hyperbolic
dt: 1.0e-3
T: 0.5
save_every: 0.01
phi0:
  cosines:
    - {k: [1, 0], amplitude: 0.2}
    - {k: [0, 2], amplitude: -0.05}
rho0:
  random: {amplitude: 0.1, decay: 1.5}
forcing: {constant: 0.125}
output: out/full
tag: run1
seed: 42
)";

ConfigError expect_config_error(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e;
  }
  ADD_FAILURE() << "no ConfigError for:\n" << text;
  return ConfigError("", -1, "");
}

}  // namespace

TEST(Config, ParsesEveryField) {
  const auto c = parse_config(kFull);
  EXPECT_EQ(c.domain.dim, 2);
  EXPECT_EQ(c.domain.modes, (std::vector<int>{8, 6}));
  EXPECT_EQ(c.domain.retained, (std::vector<int>{6, 4}));
  EXPECT_EQ(c.potential.beta_coeffs.size(), 2u);
  EXPECT_EQ(c.potential.beta_coeffs[1], (BetaTerm{5, 0.25}));
  EXPECT_EQ(c.potential.nu, -0.5);
  ASSERT_TRUE(c.tau.has_value());
  EXPECT_EQ(*c.tau, 0.1);
  EXPECT_EQ(c.scheme, Scheme::imex1_hyperbolic);
  EXPECT_EQ(c.phi0.kind, InitialData::Kind::cosines);
  EXPECT_EQ(c.phi0.cosines[1].k, (MultiIndex{0, 2}));
  EXPECT_EQ(c.rho0.kind, InitialData::Kind::random);
  EXPECT_EQ(c.rho0.decay, 1.5);
  EXPECT_EQ(c.forcing.kind, ForcingConfig::Kind::constant);
  EXPECT_EQ(c.seed, 42u);
  EXPECT_EQ(c.tag, "run1");
}

TEST(Config, RoundTripsThroughSerialization) {
  for (const char* path : {"simulate.yaml", "sweep.yaml"}) {
    const auto c = load_config(std::filesystem::path(HYPERCH_CONFIG_DIR) / path);
    EXPECT_EQ(parse_config(serialize_config(c)), c) << path;
  }
  const auto c = parse_config(kFull);
  const auto text = serialize_config(c);
  EXPECT_EQ(parse_config(text), c);
  EXPECT_EQ(serialize_config(parse_config(text)), text);
}

TEST(Config, RoundTripKeepsFullPrecision) {
  auto c = parse_config(kFull);
  c.dt = 1.0 / 3.0 * 1e-3;
  c.T = 1000 * c.dt;
  c.save_every = 10 * c.dt;
  c.potential.sigma = std::numbers::pi / 7;
  const auto back = parse_config(serialize_config(c));
  EXPECT_EQ(back.dt, c.dt);
  EXPECT_EQ(back.potential.sigma, c.potential.sigma);
}

TEST(Config, ErrorsNameFieldAndLine) {
  const auto unknown = expect_config_error("dt: 1.0e-3\nT: 1\nbogus: 3\n");
  EXPECT_EQ(unknown.field(), "bogus");
  EXPECT_EQ(unknown.line(), 2);
  EXPECT_NE(std::string(unknown.what()).find("line 3"), std::string::npos);

  const auto nested = expect_config_error("domain:\n  modes: [8]\n  lenghts: [1]\n");
  EXPECT_EQ(nested.field(), "domain.lenghts");

  const auto bad_type = expect_config_error("dt: fast\n");
  EXPECT_EQ(bad_type.field(), "dt");
  EXPECT_EQ(bad_type.line(), 0);
}

TEST(Config, RejectsInvalidTauLists) {
  const std::string base = "scheme: imex1_hyperbolic\n";
  EXPECT_EQ(expect_config_error(base + "tau_list: [0.5, 0.25, 0.25, 0.1]\n").field(), "tau_list");
  EXPECT_EQ(expect_config_error(base + "tau_list: [0.5, 0.25]\n").field(), "tau_list");
  EXPECT_EQ(expect_config_error(base + "tau_list: [0.1, 0.25, 0.5]\n").field(), "tau_list");
  EXPECT_NO_THROW(parse_config(base + "tau_list: [0.5, 0.25, 0.125]\n"));
}

TEST(Config, RejectsInconsistentSettings) {
  EXPECT_EQ(expect_config_error("dt: 3.0e-3\nT: 1\n").field(), "T");
  EXPECT_EQ(expect_config_error("dt: 1.0e-3\nT: 1\nsave_every: 2.5e-3\n").field(), "save_every");
  EXPECT_EQ(expect_config_error("tau: 0\nscheme: imex1_hyperbolic\n").field(), "scheme");
  EXPECT_EQ(expect_config_error("tau: 0.1\nscheme: imex2_parabolic\n").field(), "scheme");
  EXPECT_EQ(expect_config_error("tau: 0\nrho0: {coefficients: [1]}\n").field(), "rho0");
  EXPECT_EQ(expect_config_error("reference: {scheme: imex1_hyperbolic, dt: 1.0e-4}\n").field(),
            "reference.scheme");
  EXPECT_EQ(expect_config_error("potential: {beta_coeffs: [[2, 1]]}\n").field(), "potential");
  EXPECT_EQ(expect_config_error("potential: {sigma: 0}\n").field(), "potential");
  EXPECT_NO_THROW(parse_config("potential: {sigma: 0, mode: diagnostic}\n"));
  EXPECT_EQ(expect_config_error("domain: {modes: [8], grid: [10]}\n").field(), "domain");
  EXPECT_THROW(parse_config(""), ConfigError);
  EXPECT_THROW(parse_config("dt: [1, 2\n"), ConfigError);
}

TEST(Config, BuildsMatchingObjects) {
  const auto c = parse_config(kFull);
  const auto d = build_domain(c);
  EXPECT_EQ(d.dim, 2);
  EXPECT_EQ(d.grid, (std::array<int, 2>{24, 18}));
  const auto sys = build_system(c);
  EXPECT_EQ(sys.retained(), (MultiIndex{6, 4}));
  EXPECT_EQ(sys.potential().lambda(), 1.25);
  EXPECT_NEAR(mean(sys.forcing_at(0.2)), 0.125, 1e-15);

  const auto phi = build_initial(c.phi0, d, c.seed, 0);
  EXPECT_NEAR(phi[d.flatten({1, 0})], 0.2 * std::sqrt(1.5 * 2.25 / 2.0), 1e-15);
  const auto r1 = build_initial(c.rho0, d, c.seed, 1);
  EXPECT_EQ(r1.coeffs, build_initial(c.rho0, d, c.seed, 1).coeffs);
  EXPECT_NE(r1.coeffs, build_initial(c.rho0, d, c.seed, 0).coeffs);
  EXPECT_NE(r1.coeffs, build_initial(c.rho0, d, c.seed + 1, 1).coeffs);
  EXPECT_EQ(build_initial(InitialData{}, d, 0, 0).coeffs, SpectralField(d).coeffs);
}

TEST(Config, CoefficientListMustMatchModeCount) {
  EXPECT_THROW(parse_config("domain: {modes: [4]}\nphi0: {coefficients: [1, 2, 3, 4, 5]}\n"),
               ConfigError);
  EXPECT_THROW(parse_config("domain: {modes: [4]}\nphi0: {coefficients: [1, 2]}\n"), ConfigError);
  const auto c = parse_config("domain: {modes: [4]}\nphi0: {coefficients: [1, 2, 0, -1]}\n");
  const auto phi = build_initial(c.phi0, build_domain(c), 0, 0);
  EXPECT_EQ(phi.coeffs, (std::vector<double>{1, 2, 0, -1}));
}
