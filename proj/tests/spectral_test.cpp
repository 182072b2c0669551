#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hyperch/error.hpp"
#include "hyperch/spectral.hpp"

using namespace hyperch;
using std::numbers::pi;

namespace {

SpectralField random_field(const DomainSpec& d, std::mt19937_64& rng, double decay = 0.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  SpectralField v(d);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] = g(rng) / std::pow(1.0 + d.eigenvalue(k), decay);
  return v;
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace

TEST(Eigenpair, IntervalSpectrum) {
  const auto d = DomainSpec::interval(pi, 8);
  const auto e0 = eigenpair(d, {0, 0});
  EXPECT_DOUBLE_EQ(e0.eigenvalue, 0.0);
  EXPECT_NEAR(e0(0.3), 1.0 / std::sqrt(pi), 1e-15);
  EXPECT_NEAR(eigenpair(d, {2, 0}).eigenvalue, 4.0, 1e-13);
  EXPECT_NEAR(eigenpair(d, {2, 0})(0.7), std::sqrt(2.0 / pi) * std::cos(1.4), 1e-15);
  EXPECT_FALSE(eigenpair(d, {2, 0}).description().empty());
}

TEST(Eigenpair, BoxSpectrumIsAdditive) {
  const auto d = DomainSpec::box(pi, pi, 4, 4);
  EXPECT_NEAR(eigenpair(d, {1, 1}).eigenvalue, 2.0, 1e-13);
  EXPECT_NEAR(eigenpair(d, {2, 1})(0.4, 1.1),
              (2.0 / pi) * std::cos(0.8) * std::cos(1.1), 1e-14);
}

TEST(Eigenpair, OutOfRangeThrows) {
  const auto d = DomainSpec::interval(pi, 8);
  EXPECT_THROW(eigenpair(d, {8, 0}), ArgumentError);
  EXPECT_THROW(eigenpair(d, {-1, 0}), ArgumentError);
}

TEST(DomainSpec, ValidationRejectsBadShapes) {
  EXPECT_THROW(DomainSpec::interval(-1.0, 8), ArgumentError);
  EXPECT_THROW(DomainSpec::interval(1.0, 1), ArgumentError);
  EXPECT_THROW(DomainSpec::interval(1.0, 8, false, 4), ArgumentError);   // grid < modes
  EXPECT_THROW(DomainSpec::interval(1.0, 8, true, 10), ArgumentError);   // grid < 3/2 modes
  EXPECT_NO_THROW(DomainSpec::interval(1.0, 8, true, 12));
  EXPECT_EQ(DomainSpec::interval(1.0, 8).grid[0], 24);
  EXPECT_EQ(DomainSpec::interval(1.0, 8, false).grid[0], 8);
}

TEST(Transforms, UnitVectorRoundTrip) {
  for (const auto& d : {DomainSpec::interval(2.0, 12), DomainSpec::box(1.0, 2.0, 5, 4)}) {
    const SpectralBasis b(d);
    for (std::size_t k = 0; k < d.mode_count(); ++k) {
      const auto e = SpectralField::unit(d, d.unflatten(k));
      EXPECT_LT(max_diff(b.forward(b.inverse(e)), e), 1e-13) << k;
    }
  }
}

TEST(Transforms, InverseSamplesEigenfunctions) {
  const auto d = DomainSpec::box(1.5, 2.5, 4, 3);
  const SpectralBasis b(d);
  const MultiIndex k{3, 2};
  const GridField g = b.inverse(SpectralField::unit(d, k));
  const auto e = eigenpair(d, k);
  const auto& x = b.nodes(0);
  const auto& y = b.nodes(1);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j)
      EXPECT_NEAR(g.values[i * y.size() + j], e(x[i], y[j]), 1e-14);
}

TEST(Transforms, ConstantGridGivesMeanMode) {
  const auto d = DomainSpec::box(2.0, 3.0, 4, 4);
  const SpectralBasis b(d);
  GridField g(d);
  for (auto& v : g.values) v = 1.7;
  const auto c = b.forward(g);
  EXPECT_NEAR(c[0], 1.7 * std::sqrt(6.0), 1e-13);
  for (std::size_t k = 1; k < c.size(); ++k) EXPECT_NEAR(c[k], 0.0, 1e-13);
}

TEST(Transforms, RandomRoundTrip) {
  std::mt19937_64 rng(1);
  for (const auto& d : {DomainSpec::interval(2 * pi, 64), DomainSpec::box(1.0, 2.0, 16, 12)}) {
    const SpectralBasis b(d);
    for (int rep = 0; rep < 10; ++rep) {
      const auto v = random_field(d, rng, 1.0);
      EXPECT_LT(max_diff(b.forward(b.inverse(v)), v), 1e-12);
    }
  }
}

TEST(Transforms, ShapeMismatchThrows) {
  const SpectralBasis b(DomainSpec::interval(1.0, 8));
  EXPECT_THROW(b.inverse(SpectralField(DomainSpec::interval(1.0, 6))), ShapeError);
  EXPECT_THROW(b.forward(GridField(DomainSpec::interval(2.0, 8))), ShapeError);
}

TEST(Transforms, Parseval) {
  std::mt19937_64 rng(2);
  const auto d = DomainSpec::box(1.3, 0.7, 10, 8);
  const SpectralBasis b(d);
  for (int rep = 0; rep < 10; ++rep) {
    const auto v = random_field(d, rng);
    GridField sq = b.inverse(v);
    for (auto& x : sq.values) x *= x;
    double coeff_sq = 0.0;
    for (double c : v.coeffs) coeff_sq += c * c;
    EXPECT_NEAR(std::sqrt(b.integrate(sq)), std::sqrt(coeff_sq), 1e-10 * std::sqrt(coeff_sq));
  }
}

TEST(Project, IdempotentIdentityAndCommutesWithLaplacian) {
  std::mt19937_64 rng(3);
  const auto d = DomainSpec::box(1.0, 2.0, 8, 6);
  for (int rep = 0; rep < 20; ++rep) {
    const auto v = random_field(d, rng);
    const MultiIndex n{1 + rep % 8, 1 + rep % 6};
    const auto p = project(v, n);
    EXPECT_EQ(project(p, n).coeffs, p.coeffs);
    EXPECT_EQ(laplacian(project(v, n)).coeffs, project(laplacian(v), n).coeffs);
    EXPECT_EQ(project(v, d.modes).coeffs, v.coeffs);
    EXPECT_NEAR(mean(laplacian(v)), 0.0, 1e-15);
  }
  const auto v1 = random_field(DomainSpec::interval(1.0, 8), rng);
  const auto p1 = project(v1, 3);
  for (std::size_t k = 3; k < 8; ++k) EXPECT_EQ(p1[k], 0.0);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(p1[k], v1[k]);
}

TEST(Laplacian, EigenRelation) {
  const auto d = DomainSpec::interval(pi, 8);
  EXPECT_EQ(max_diff(laplacian(SpectralField::unit(d, {0, 0})), SpectralField(d)), 0.0);
  const auto e5 = SpectralField::unit(d, {5, 0});
  EXPECT_NEAR(laplacian(e5)[5], -25.0, 1e-12);
  // cos(3x) on [0, pi] is mode 3
  const auto c3 = SpectralField::cosine(d, {3, 0}, 1.0);
  EXPECT_NEAR(laplacian(c3)[3], -9.0 * c3[3], 1e-12);
}

TEST(Mean, Values) {
  const auto d = DomainSpec::interval(2.0, 8);
  EXPECT_NEAR(mean(SpectralField::constant(d, 1.0)), 1.0, 1e-15);
  EXPECT_EQ(mean(SpectralField::unit(d, {3, 0})), 0.0);
  const auto v = SpectralField::constant(d, 0.3) + 0.1 * SpectralField::unit(d, {2, 0});
  EXPECT_NEAR(mean(v), 0.3, 1e-15);
}

TEST(NonlinearApply, IdentityAndSquareOfConstant) {
  std::mt19937_64 rng(4);
  const auto d = DomainSpec::interval(2.0, 16);
  const SpectralBasis b(d);
  const auto v = random_field(d, rng);
  EXPECT_LT(max_diff(b.nonlinear_apply(v, [](double s) { return s; }), v), 1e-12);
  const auto c = SpectralField::constant(d, 0.7);
  EXPECT_LT(max_diff(b.nonlinear_apply(c, [](double s) { return s * s; }),
                     SpectralField::constant(d, 0.49)),
            1e-13);
}

TEST(NonlinearApply, CubeMatchesTripleAngle) {
  // cos^3 a = (3 cos a + cos 3a) / 4
  const auto d = DomainSpec::interval(2 * pi, 32);
  const SpectralBasis b(d);
  for (int k : {1, 3, 7, 10}) {
    const auto v = SpectralField::cosine(d, {k, 0}, 0.1);
    const auto expect = SpectralField::cosine(d, {k, 0}, 0.00075) +
                        SpectralField::cosine(d, {3 * k, 0}, 0.00025);
    EXPECT_LT(max_diff(b.nonlinear_apply(v, [](double s) { return s * s * s; }), expect), 1e-12);
  }
}

TEST(NonlinearApply, AliasingAppearsWithoutPadding) {
  const auto padded = DomainSpec::interval(2 * pi, 16);
  const auto plain = DomainSpec::interval(2 * pi, 16, false);
  const auto cube = [](double s) { return s * s * s; };
  const auto v = SpectralField::cosine(padded, {12, 0}, 1.0);
  const auto exact = SpectralBasis(padded).nonlinear_apply(v, cube);
  SpectralField w(plain, v.coeffs);
  const auto aliased = SpectralBasis(plain).nonlinear_apply(w, cube);
  EXPECT_GT(max_diff(SpectralField(padded, aliased.coeffs), exact), 1e-3);
}

TEST(NonlinearApply, OverflowIsReported) {
  const auto d = DomainSpec::interval(1.0, 8);
  const SpectralBasis b(d);
  const auto v = SpectralField::constant(d, 1e200);
  EXPECT_THROW(b.nonlinear_apply(v, [](double s) { return s * s * s; }), NumericalOverflowError);
}
