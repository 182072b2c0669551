// sobolev.hpp
// Inverse Neumann operator, the H/V/V*/W/W*/Z/Z* norms, duality pairing and
// the free energy, all evaluated on eigenbasis coefficients.

#pragma once

#include <string_view>

#include "hyperch/potential.hpp"
#include "hyperch/spectral.hpp"

namespace hyperch {

enum class NormKind { H, V, Vstar, W, Wstar, Z, Zstar };

std::string_view to_string(NormKind kind);

/// z = N(zeta - mean(zeta)): z_k = zeta_k / lambda_k for k != 0, z_0 = 0.
SpectralField inv_neumann(const SpectralField& zeta);

/// Spectral norm formulas. V* uses |grad N(v - v_mean)|^2 + |v_mean|^2.
double norm(const SpectralField& v, NormKind kind);
double norm_squared(const SpectralField& v, NormKind kind);

/// sum_k zeta_k v_k, the H inner product extended to the dual pairing.
double pairing(const SpectralField& zeta, const SpectralField& v);

struct EnergyBreakdown {
  double total = 0.0;
  double willmore_part = 0.0;  // 1/2 int (-Delta v + f(v))^2
  double gl_part = 0.0;        // int (1/2 |grad v|^2 + F(v))
  double nu = 0.0;
};

/// Free energy on the basis' collocation grid; the gradient term is spectral.
EnergyBreakdown energy(const SpectralField& phi, const PotentialSpec& spec,
                       const SpectralBasis& basis);

struct CompactnessCheck {
  double lhs = 0.0;       // |v|_V
  double rhs = 0.0;       // delta |Delta v| + C |v|_*
  double constant = 0.0;  // C_{Omega,delta}, fitted over the retained modes
};

/// Both sides of |v|_V <= delta |Delta v| + C |v|_*. C is the smallest
/// constant for which the modewise sufficient condition
///   1 + lambda_k <= delta^2 lambda_k^2 + C^2 m_k^2
/// holds on every retained mode (m_k^2 = 1/lambda_k, or 1/|Omega| for k = 0),
/// hence the inequality holds for every field of the space.
CompactnessCheck compactness_check(const SpectralField& v, double delta);

}  // namespace hyperch
