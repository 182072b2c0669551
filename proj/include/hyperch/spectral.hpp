// spectral.hpp
// Neumann-Laplacian cosine eigenbasis on an interval or rectangle.
//
// Coefficients are stored against the L2-orthonormal eigenfunctions
//   e_0(x) = 1/sqrt(L),  e_k(x) = sqrt(2/L) cos(k pi x / L),  k >= 1,
// tensorised per axis in 2D, with eigenvalue (k pi / L)^2 summed over axes.
// Flat index of (k1, k2) is k1 * modes[1] + k2 (row-major).
//
// The collocation grid is the cell-midpoint grid x_j = (j + 1/2) L / N. The
// midpoint rule integrates cos(m pi x / L) exactly for m < 2N, so with
// N >= 3 * modes every Galerkin integral of the cubic model (including the
// quintic beta'(phi) w e_i term and the energy density) is exact.

#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace hyperch {

using MultiIndex = std::array<int, 2>;

struct DomainSpec {
  int dim = 1;
  std::array<double, 2> lengths{1.0, 1.0};
  std::array<int, 2> modes{2, 1};
  std::array<int, 2> grid{2, 1};
  bool dealias = true;

  /// Padding factor used when `grid` is not given explicitly and dealiasing is on.
  static constexpr int default_padding = 3;

  /// 1D interval [0, L]. grid = 0 picks the default (padded when dealiasing).
  static DomainSpec interval(double length, int modes, bool dealias = true, int grid = 0);
  /// 2D rectangle [0, L1] x [0, L2].
  static DomainSpec box(double l1, double l2, int m1, int m2, bool dealias = true, int g1 = 0,
                        int g2 = 0);

  double volume() const;
  std::size_t mode_count() const;
  std::size_t grid_count() const;
  MultiIndex unflatten(std::size_t flat) const;
  std::size_t flatten(const MultiIndex& k) const;
  bool contains(const MultiIndex& k) const;
  double eigenvalue(const MultiIndex& k) const;
  double eigenvalue(std::size_t flat) const { return eigenvalue(unflatten(flat)); }

  /// Throws ArgumentError on violated invariants.
  void validate() const;

  /// Same geometry and mode layout (grid may differ).
  bool same_space(const DomainSpec& other) const;
  bool operator==(const DomainSpec&) const = default;
};

/// Coefficient vector on the eigenbasis.
struct SpectralField {
  DomainSpec domain;
  std::vector<double> coeffs;

  SpectralField() = default;
  explicit SpectralField(const DomainSpec& d);
  SpectralField(const DomainSpec& d, std::vector<double> c);

  static SpectralField unit(const DomainSpec& d, const MultiIndex& k);
  /// The constant function c on the domain.
  static SpectralField constant(const DomainSpec& d, double c);
  /// amplitude * cos(k1 pi x/L1) [cos(k2 pi y/L2)], the raw cosine convention.
  static SpectralField cosine(const DomainSpec& d, const MultiIndex& k, double amplitude);

  std::size_t size() const { return coeffs.size(); }
  double& operator[](std::size_t i) { return coeffs[i]; }
  double operator[](std::size_t i) const { return coeffs[i]; }
  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double a);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double a, SpectralField b);

/// Values on the tensor collocation grid (row-major, axis 0 slowest).
struct GridField {
  DomainSpec domain;
  std::vector<double> values;

  GridField() = default;
  explicit GridField(const DomainSpec& d);
  bool all_finite() const;
};

struct Eigenpair {
  double eigenvalue = 0.0;
  MultiIndex index{0, 0};
  DomainSpec domain;

  /// e_k evaluated at a point (x[1] ignored in 1D).
  double operator()(double x, double y = 0.0) const;
  std::string description() const;
};

Eigenpair eigenpair(const DomainSpec& d, const MultiIndex& k);

/// Precomputed collocation tables for one domain.
class SpectralBasis {
 public:
  explicit SpectralBasis(const DomainSpec& d);

  const DomainSpec& domain() const { return domain_; }
  /// Eigenvalue per flat coefficient index.
  const std::vector<double>& eigenvalues() const { return eig_; }
  /// Grid coordinates along an axis.
  const std::vector<double>& nodes(int axis) const { return nodes_[static_cast<std::size_t>(axis)]; }
  /// Quadrature weight of one grid cell.
  double cell_volume() const { return cell_volume_; }

  GridField inverse(const SpectralField& v) const;
  SpectralField forward(const GridField& g) const;

  /// Pointwise fn on the (padded) grid, projected back onto the retained modes.
  SpectralField nonlinear_apply(const SpectralField& v, const std::function<double(double)>& fn) const;

  /// Quadrature of a grid field over the domain.
  double integrate(const GridField& g) const;

 private:
  void apply_inverse(const std::vector<double>& in, std::vector<double>& out) const;
  void apply_forward(const std::vector<double>& in, std::vector<double>& out) const;

  DomainSpec domain_;
  std::vector<double> eig_;
  // Per axis: synth[j * m + k] = e_k(x_j); anal[k * N + j] = w * e_k(x_j).
  std::array<std::vector<double>, 2> synth_;
  std::array<std::vector<double>, 2> anal_;
  std::array<std::vector<double>, 2> nodes_;
  double cell_volume_ = 1.0;
};

/// Zeroes coefficients with index >= n (per axis). Idempotent.
SpectralField project(const SpectralField& v, const MultiIndex& n);
SpectralField project(const SpectralField& v, int n);

/// (Delta v)_k = -lambda_k v_k.
SpectralField laplacian(const SpectralField& v);

/// Generalised mean value (1/|Omega|) <v, 1>.
double mean(const SpectralField& v);

/// Throws ShapeError unless both fields live on the same space.
void require_same_space(const SpectralField& a, const SpectralField& b, const char* where);

}  // namespace hyperch
