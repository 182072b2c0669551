#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "hyperch/error.hpp"
#include "hyperch/sobolev.hpp"

using namespace hyperch;
using boost::math::quadrature::gauss_kronrod;
using std::numbers::pi;

namespace {

SpectralField random_field(const DomainSpec& d, std::mt19937_64& rng, bool zero_mean = false) {
  std::normal_distribution<double> g(0.0, 1.0);
  SpectralField v(d);
  for (auto& c : v.coeffs) c = g(rng);
  if (zero_mean) v[0] = 0.0;
  return v;
}

double integrate(const std::function<double(double)>& f, double a, double b) {
  return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

}  // namespace

TEST(InvNeumann, DiagonalActionAndMeanRemoval) {
  const auto d = DomainSpec::interval(2.0, 10);
  for (int k = 1; k < 10; ++k) {
    const auto e = SpectralField::unit(d, {k, 0});
    const auto z = inv_neumann(e);
    EXPECT_NEAR(z[static_cast<std::size_t>(k)], 1.0 / d.eigenvalue(MultiIndex{k, 0}), 1e-15);
  }
  const auto z = inv_neumann(SpectralField::constant(d, 3.0));
  for (double c : z.coeffs) EXPECT_EQ(c, 0.0);
}

TEST(InvNeumann, IdentitiesOnRandomFields) {
  std::mt19937_64 rng(10);
  for (const auto& d : {DomainSpec::interval(2 * pi, 32), DomainSpec::box(1.0, 1.7, 8, 6)}) {
    for (int rep = 0; rep < 100; ++rep) {
      const auto zeta = random_field(d, rng);
      const auto nz = inv_neumann(zeta);
      const auto back = -1.0 * laplacian(nz);
      EXPECT_NEAR(back[0], 0.0, 1e-12);
      for (std::size_t k = 1; k < d.mode_count(); ++k) EXPECT_NEAR(back[k], zeta[k], 1e-12);
      EXPECT_NEAR(mean(nz), 0.0, 1e-12);
      double expect = 0.0;
      for (std::size_t k = 1; k < d.mode_count(); ++k) expect += zeta[k] * zeta[k] / d.eigenvalue(k);
      EXPECT_NEAR(pairing(zeta, nz), expect, 1e-12 * expect);
      EXPECT_GE(pairing(zeta, nz), 0.0);
    }
  }
}

TEST(InvNeumann, PairingVanishesOnlyForConstants) {
  const auto d = DomainSpec::interval(1.0, 8);
  const auto c = SpectralField::constant(d, 2.0);
  EXPECT_EQ(pairing(c, inv_neumann(c)), 0.0);
  const auto v = c + 1e-3 * SpectralField::unit(d, {7, 0});
  EXPECT_GT(pairing(v, inv_neumann(v)), 0.0);
}

TEST(Norms, ExampleValues) {
  const auto d = DomainSpec::interval(2.5, 8);
  EXPECT_NEAR(norm(SpectralField::constant(d, 1.0), NormKind::Vstar), 1.0, 1e-15);
  for (int k = 1; k < 8; ++k) {
    const auto e = SpectralField::unit(d, {k, 0});
    const double lam = d.eigenvalue(MultiIndex{k, 0});
    EXPECT_NEAR(norm(e, NormKind::Vstar), 1.0 / std::sqrt(lam), 1e-14);
    EXPECT_NEAR(norm_squared(e, NormKind::W), 1.0 + lam * lam, 1e-12 * lam * lam);
    EXPECT_NEAR(norm_squared(e, NormKind::Z), std::pow(1.0 + lam * lam, 2), 1e-12 * std::pow(lam, 4));
    EXPECT_NEAR(norm_squared(e, NormKind::Zstar), 1.0 / std::pow(1.0 + lam * lam, 2), 1e-16);
    EXPECT_NEAR(norm_squared(e, NormKind::V), 1.0 + lam, 1e-12 * lam);
    EXPECT_NEAR(norm(e, NormKind::H), 1.0, 1e-15);
  }
}

TEST(Norms, VstarMatchesQuadratureOfGradient) {
  // |grad N e_k|^2 integrated independently: e_k' = -sqrt(2/L) (k pi/L) sin(k pi x/L)
  const double L = 1.7;
  const auto d = DomainSpec::interval(L, 12);
  for (int k = 1; k < 12; ++k) {
    const double w = k * pi / L;
    const double lam = w * w;
    const auto grad = [&](double x) {
      const double g = -std::sqrt(2.0 / L) * w * std::sin(w * x) / lam;
      return g * g;
    };
    EXPECT_NEAR(norm_squared(SpectralField::unit(d, {k, 0}), NormKind::Vstar), integrate(grad, 0, L),
                1e-12);
  }
}

TEST(Norms, EmbeddingChainOnUnitSpectrum) {
  // coefficient-wise ordering needs every positive eigenvalue >= 1 (here L = pi)
  std::mt19937_64 rng(11);
  const auto d = DomainSpec::interval(pi, 24);
  for (int rep = 0; rep < 100; ++rep) {
    const auto v = random_field(d, rng, true);
    const double chain[] = {norm(v, NormKind::Zstar), norm(v, NormKind::Wstar),
                            norm(v, NormKind::Vstar), norm(v, NormKind::H),
                            norm(v, NormKind::V),     norm(v, NormKind::W),
                            norm(v, NormKind::Z)};
    for (int i = 0; i + 1 < 7; ++i) EXPECT_LE(chain[i], chain[i + 1] * (1 + 1e-15)) << i;
  }
}

TEST(Pairing, Orthonormality) {
  const auto d = DomainSpec::box(1.0, 2.0, 4, 3);
  for (std::size_t j = 0; j < d.mode_count(); ++j)
    for (std::size_t k = 0; k < d.mode_count(); ++k)
      EXPECT_EQ(pairing(SpectralField::unit(d, d.unflatten(j)), SpectralField::unit(d, d.unflatten(k))),
                j == k ? 1.0 : 0.0);
}

TEST(Pairing, WithOneGivesMean) {
  std::mt19937_64 rng(12);
  const auto d = DomainSpec::box(1.2, 0.8, 5, 5);
  const auto one = SpectralField::constant(d, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const auto v = random_field(d, rng);
    EXPECT_NEAR(pairing(one, v) / d.volume(), mean(v), 1e-14);
  }
  EXPECT_THROW(pairing(one, SpectralField(DomainSpec::interval(1.0, 4))), ShapeError);
}

TEST(Pairing, DiscreteChainRuleIsFirstOrder) {
  // <(z1 - z0)/dt, N z1> - (|z1|_*^2 - |z0|_*^2)/(2 dt) = (dt/2) |(z1 - z0)/dt|_*^2
  const auto d = DomainSpec::interval(2.0, 8);
  const auto z_at = [&](double t) {
    SpectralField z(d);
    for (std::size_t k = 1; k < z.size(); ++k) z[k] = std::sin(t + k) / static_cast<double>(k);
    return z;
  };
  double prev = 0.0;
  for (double dt : {1e-2, 5e-3, 2.5e-3}) {
    const auto z0 = z_at(0.3), z1 = z_at(0.3 + dt);
    const auto dz = (1.0 / dt) * (z1 - z0);
    const double lhs = pairing(dz, inv_neumann(z1));
    const double rhs = (norm_squared(z1, NormKind::Vstar) - norm_squared(z0, NormKind::Vstar)) / (2 * dt);
    const double gap = lhs - rhs;
    EXPECT_NEAR(gap, 0.5 * dt * norm_squared(dz, NormKind::Vstar), 1e-10);
    if (prev > 0.0) {
      EXPECT_NEAR(prev / gap, 2.0, 0.05);
    }
    prev = gap;
  }
}

TEST(Energy, ConstantStates) {
  const auto d = DomainSpec::interval(3.0, 8);
  const SpectralBasis b(d);
  for (double nu : {1.0, 2.5}) {
    const auto p = PotentialSpec::classical(nu);
    EXPECT_NEAR(energy(SpectralField::constant(d, 1.0), p, b).total, 0.0, 1e-14);
    EXPECT_NEAR(energy(SpectralField(d), p, b).total, nu * 3.0 / 4.0, 1e-14);
  }
}

TEST(Energy, BreakdownAddsUp) {
  std::mt19937_64 rng(13);
  const auto d = DomainSpec::box(1.0, 1.5, 6, 6);
  const SpectralBasis b(d);
  const auto p = PotentialSpec::classical(-0.7);
  for (int rep = 0; rep < 10; ++rep) {
    auto v = random_field(d, rng);
    v *= 0.2;
    const auto e = energy(v, p, b);
    EXPECT_NEAR(e.total, e.willmore_part + e.nu * e.gl_part, 1e-12 * std::abs(e.total));
    EXPECT_EQ(e.nu, -0.7);
  }
}

TEST(Energy, SingleModeMatchesAdaptiveQuadrature) {
  const double L = 2.0, nu = 1.3;
  const auto d = DomainSpec::interval(L, 8);
  const auto p = PotentialSpec::classical(nu);
  const double a = 0.1;  // phi = a e_1
  const double w = pi / L;
  const auto phi = [&](double x) { return a * std::sqrt(2.0 / L) * std::cos(w * x); };
  const auto dphi = [&](double x) { return -a * std::sqrt(2.0 / L) * w * std::sin(w * x); };
  const auto density = [&](double x) {
    const double s = phi(x);
    const double wx = w * w * s + s * s * s - s;  // -phi'' + f(phi)
    const double F = 0.25 * (s * s - 1.0) * (s * s - 1.0);
    return 0.5 * wx * wx + nu * (0.5 * dphi(x) * dphi(x) + F);
  };
  const auto e = energy(a * SpectralField::unit(d, {1, 0}), p, SpectralBasis(d));
  EXPECT_NEAR(e.total, integrate(density, 0.0, L), 1e-9);
}

TEST(Energy, OverflowThrows) {
  const auto d = DomainSpec::interval(1.0, 4);
  EXPECT_THROW(energy(SpectralField::constant(d, 1e120), PotentialSpec::classical(), SpectralBasis(d)),
               NumericalOverflowError);
}

TEST(Compactness, HighModeDominatedByLaplacianTerm) {
  const auto d = DomainSpec::interval(pi, 40);
  const double delta = 0.5;
  const auto e = SpectralField::unit(d, {39, 0});
  const auto c = compactness_check(e, delta);
  const double lam = 39.0 * 39.0;
  EXPECT_NEAR(c.lhs, std::sqrt(1.0 + lam), 1e-10);
  EXPECT_LE(c.lhs, c.rhs);
  EXPECT_GT(delta * lam, c.constant / std::sqrt(lam));
}

TEST(Compactness, ConstantBalancesMeanTerm) {
  const auto d = DomainSpec::interval(2.0, 8);
  const auto c = compactness_check(SpectralField::constant(d, 1.0), 0.3);
  // lhs = sqrt|Omega|, rhs = C |1|_* = C, with C >= sqrt|Omega|
  EXPECT_NEAR(c.lhs, std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(c.rhs, c.constant, 1e-14);
  EXPECT_GE(c.constant, std::sqrt(2.0));
}

TEST(Compactness, HoldsOnRandomFields) {
  std::mt19937_64 rng(14);
  for (double delta : {0.05, 0.3, 1.0}) {
    const auto d = DomainSpec::box(1.0, 2.0, 10, 10);
    for (int rep = 0; rep < 50; ++rep) {
      const auto c = compactness_check(random_field(d, rng), delta);
      EXPECT_LE(c.lhs, c.rhs * (1 + 1e-14));
    }
  }
  EXPECT_THROW(compactness_check(SpectralField(DomainSpec::interval(1.0, 4)), 0.0), ArgumentError);
}
