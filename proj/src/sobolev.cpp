// sobolev.cpp

#include "hyperch/sobolev.hpp"

#include <algorithm>
#include <cmath>

#include "hyperch/error.hpp"

namespace hyperch {

std::string_view to_string(NormKind kind) {
  switch (kind) {
    case NormKind::H: return "H";
    case NormKind::V: return "V";
    case NormKind::Vstar: return "Vstar";
    case NormKind::W: return "W";
    case NormKind::Wstar: return "Wstar";
    case NormKind::Z: return "Z";
    case NormKind::Zstar: return "Zstar";
  }
  return "?";
}

SpectralField inv_neumann(const SpectralField& zeta) {
  SpectralField z = zeta;
  z.coeffs[0] = 0.0;
  for (std::size_t i = 1; i < z.coeffs.size(); ++i) z.coeffs[i] /= zeta.domain.eigenvalue(i);
  return z;
}

double norm_squared(const SpectralField& v, NormKind kind) {
  const auto& d = v.domain;
  double acc = 0.0;
  if (kind == NormKind::Vstar) {
    for (std::size_t i = 1; i < v.coeffs.size(); ++i)
      acc += v.coeffs[i] * v.coeffs[i] / d.eigenvalue(i);
    return acc + v.coeffs[0] * v.coeffs[0] / d.volume();
  }
  for (std::size_t i = 0; i < v.coeffs.size(); ++i) {
    const double lam = d.eigenvalue(i);
    const double c2 = v.coeffs[i] * v.coeffs[i];
    const double g = 1.0 + lam * lam;
    switch (kind) {
      case NormKind::H: acc += c2; break;
      case NormKind::V: acc += (1.0 + lam) * c2; break;
      case NormKind::W: acc += g * c2; break;
      case NormKind::Wstar: acc += c2 / g; break;
      case NormKind::Z: acc += g * g * c2; break;
      case NormKind::Zstar: acc += c2 / (g * g); break;
      case NormKind::Vstar: break;
    }
  }
  return acc;
}

double norm(const SpectralField& v, NormKind kind) { return std::sqrt(norm_squared(v, kind)); }

double pairing(const SpectralField& zeta, const SpectralField& v) {
  require_same_space(zeta, v, "pairing");
  double acc = 0.0;
  for (std::size_t i = 0; i < v.coeffs.size(); ++i) acc += zeta.coeffs[i] * v.coeffs[i];
  return acc;
}

EnergyBreakdown energy(const SpectralField& phi, const PotentialSpec& spec,
                       const SpectralBasis& basis) {
  const auto& eig = basis.eigenvalues();
  SpectralField lin = phi;  // (-Delta - lambda) phi, the linear part of w
  double grad = 0.0;
  for (std::size_t i = 0; i < lin.coeffs.size(); ++i) {
    grad += eig[i] * phi.coeffs[i] * phi.coeffs[i];
    lin.coeffs[i] = (eig[i] - spec.lambda()) * phi.coeffs[i];
  }
  const GridField pg = basis.inverse(phi);
  GridField wg = basis.inverse(lin);
  GridField dens(basis.domain());
  for (std::size_t j = 0; j < wg.values.size(); ++j) {
    const double s = pg.values[j];
    const double w = wg.values[j] + beta_eval(spec, s, 0);
    wg.values[j] = 0.5 * w * w;
    dens.values[j] = F_eval(spec, s);
  }
  EnergyBreakdown e;
  e.willmore_part = basis.integrate(wg);
  e.gl_part = 0.5 * grad + basis.integrate(dens);
  e.nu = spec.nu();
  e.total = e.willmore_part + e.nu * e.gl_part;
  if (!std::isfinite(e.total)) throw NumericalOverflowError("energy: non-finite value");
  return e;
}

CompactnessCheck compactness_check(const SpectralField& v, double delta) {
  if (!(delta > 0.0)) throw ArgumentError("compactness_check: delta must be positive");
  const auto& d = v.domain;
  double c2 = d.volume();  // k = 0 term: (1 + 0) / (1 / |Omega|)
  for (std::size_t i = 1; i < v.coeffs.size(); ++i) {
    const double lam = d.eigenvalue(i);
    c2 = std::max(c2, (1.0 + lam - delta * delta * lam * lam) * lam);
  }
  CompactnessCheck out;
  out.constant = std::sqrt(std::max(c2, 0.0));
  out.lhs = norm(v, NormKind::V);
  out.rhs = delta * norm(laplacian(v), NormKind::H) + out.constant * norm(v, NormKind::Vstar);
  return out;
}

}  // namespace hyperch
