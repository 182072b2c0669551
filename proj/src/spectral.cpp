// spectral.cpp

#include "hyperch/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hyperch/error.hpp"

namespace hyperch {

namespace {

double basis_value(double length, int k, double x) {
  if (k == 0) return 1.0 / std::sqrt(length);
  return std::sqrt(2.0 / length) * std::cos(k * std::numbers::pi * x / length);
}

int default_grid(int modes, bool dealias) {
  return dealias ? DomainSpec::default_padding * modes : modes;
}

}  // namespace

// ---------------------------------------------------------------- DomainSpec

DomainSpec DomainSpec::interval(double length, int modes, bool dealias, int grid) {
  DomainSpec d;
  d.dim = 1;
  d.lengths = {length, 1.0};
  d.modes = {modes, 1};
  d.grid = {grid > 0 ? grid : default_grid(modes, dealias), 1};
  d.dealias = dealias;
  d.validate();
  return d;
}

DomainSpec DomainSpec::box(double l1, double l2, int m1, int m2, bool dealias, int g1, int g2) {
  DomainSpec d;
  d.dim = 2;
  d.lengths = {l1, l2};
  d.modes = {m1, m2};
  d.grid = {g1 > 0 ? g1 : default_grid(m1, dealias), g2 > 0 ? g2 : default_grid(m2, dealias)};
  d.dealias = dealias;
  d.validate();
  return d;
}

double DomainSpec::volume() const { return dim == 1 ? lengths[0] : lengths[0] * lengths[1]; }

std::size_t DomainSpec::mode_count() const {
  return static_cast<std::size_t>(modes[0]) * static_cast<std::size_t>(dim == 1 ? 1 : modes[1]);
}

std::size_t DomainSpec::grid_count() const {
  return static_cast<std::size_t>(grid[0]) * static_cast<std::size_t>(dim == 1 ? 1 : grid[1]);
}

MultiIndex DomainSpec::unflatten(std::size_t flat) const {
  if (dim == 1) return {static_cast<int>(flat), 0};
  const auto m2 = static_cast<std::size_t>(modes[1]);
  return {static_cast<int>(flat / m2), static_cast<int>(flat % m2)};
}

std::size_t DomainSpec::flatten(const MultiIndex& k) const {
  if (dim == 1) return static_cast<std::size_t>(k[0]);
  return static_cast<std::size_t>(k[0]) * static_cast<std::size_t>(modes[1]) +
         static_cast<std::size_t>(k[1]);
}

bool DomainSpec::contains(const MultiIndex& k) const {
  if (k[0] < 0 || k[0] >= modes[0]) return false;
  if (dim == 1) return k[1] == 0;
  return k[1] >= 0 && k[1] < modes[1];
}

double DomainSpec::eigenvalue(const MultiIndex& k) const {
  const double a = k[0] * std::numbers::pi / lengths[0];
  if (dim == 1) return a * a;
  const double b = k[1] * std::numbers::pi / lengths[1];
  return a * a + b * b;
}

void DomainSpec::validate() const {
  if (dim != 1 && dim != 2) throw ArgumentError("domain: dim must be 1 or 2");
  for (int a = 0; a < dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (!(lengths[i] > 0.0) || !std::isfinite(lengths[i]))
      throw ArgumentError("domain: lengths must be positive");
    if (modes[i] < 2) throw ArgumentError("domain: at least 2 modes per axis");
    if (grid[i] < modes[i]) throw ArgumentError("domain: grid must be >= modes on every axis");
    if (dealias && 2 * grid[i] < 3 * modes[i])
      throw ArgumentError("domain: dealiasing needs grid >= 3/2 modes on every axis");
  }
}

bool DomainSpec::same_space(const DomainSpec& o) const {
  if (dim != o.dim) return false;
  for (int a = 0; a < dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (lengths[i] != o.lengths[i] || modes[i] != o.modes[i]) return false;
  }
  return true;
}

// ------------------------------------------------------------- SpectralField

SpectralField::SpectralField(const DomainSpec& d) : domain(d), coeffs(d.mode_count(), 0.0) {}

SpectralField::SpectralField(const DomainSpec& d, std::vector<double> c)
    : domain(d), coeffs(std::move(c)) {
  if (coeffs.size() != d.mode_count())
    throw ShapeError("SpectralField: expected " + std::to_string(d.mode_count()) +
                     " coefficients, got " + std::to_string(coeffs.size()));
}

SpectralField SpectralField::unit(const DomainSpec& d, const MultiIndex& k) {
  if (!d.contains(k)) throw ArgumentError("SpectralField::unit: mode index out of range");
  SpectralField f(d);
  f.coeffs[d.flatten(k)] = 1.0;
  return f;
}

SpectralField SpectralField::constant(const DomainSpec& d, double c) {
  SpectralField f(d);
  f.coeffs[0] = c * std::sqrt(d.volume());
  return f;
}

SpectralField SpectralField::cosine(const DomainSpec& d, const MultiIndex& k, double amplitude) {
  // amplitude * prod_a cos(k_a pi x_a / L_a) = c * prod_a e_{k_a}(x_a)
  double scale = 1.0;
  for (int a = 0; a < d.dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    scale *= k[i] == 0 ? std::sqrt(d.lengths[i]) : std::sqrt(d.lengths[i] / 2.0);
  }
  SpectralField f = unit(d, k);
  f.coeffs[d.flatten(k)] = amplitude * scale;
  return f;
}

bool SpectralField::all_finite() const {
  for (double c : coeffs)
    if (!std::isfinite(c)) return false;
  return true;
}

void require_same_space(const SpectralField& a, const SpectralField& b, const char* where) {
  if (!a.domain.same_space(b.domain) || a.coeffs.size() != b.coeffs.size())
    throw ShapeError(std::string(where) + ": fields live on different domains");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_space(*this, o, "operator+=");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_space(*this, o, "operator-=");
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double a) {
  for (double& c : coeffs) c *= a;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double a, SpectralField b) { return b *= a; }

// ----------------------------------------------------------------- GridField

GridField::GridField(const DomainSpec& d) : domain(d), values(d.grid_count(), 0.0) {}

bool GridField::all_finite() const {
  for (double v : values)
    if (!std::isfinite(v)) return false;
  return true;
}

// ----------------------------------------------------------------- Eigenpair

double Eigenpair::operator()(double x, double y) const {
  double v = basis_value(domain.lengths[0], index[0], x);
  if (domain.dim == 2) v *= basis_value(domain.lengths[1], index[1], y);
  return v;
}

std::string Eigenpair::description() const {
  std::ostringstream os;
  os.precision(17);
  for (int a = 0; a < domain.dim; ++a) {
    const auto i = static_cast<std::size_t>(a);
    if (a > 0) os << " * ";
    if (index[i] == 0)
      os << "1/sqrt(" << domain.lengths[i] << ")";
    else
      os << "sqrt(2/" << domain.lengths[i] << ") cos(" << index[i] << " pi " << (a == 0 ? 'x' : 'y')
         << " / " << domain.lengths[i] << ")";
  }
  os << ", eigenvalue " << eigenvalue;
  return os.str();
}

Eigenpair eigenpair(const DomainSpec& d, const MultiIndex& k) {
  if (!d.contains(k))
    throw ArgumentError("eigenpair: index (" + std::to_string(k[0]) + ", " + std::to_string(k[1]) +
                        ") outside the mode range");
  return Eigenpair{d.eigenvalue(k), k, d};
}

// ------------------------------------------------------------- SpectralBasis

SpectralBasis::SpectralBasis(const DomainSpec& d) : domain_(d) {
  d.validate();
  eig_.resize(d.mode_count());
  for (std::size_t i = 0; i < eig_.size(); ++i) eig_[i] = d.eigenvalue(i);

  cell_volume_ = 1.0;
  for (int a = 0; a < d.dim; ++a) {
    const auto ax = static_cast<std::size_t>(a);
    const int m = d.modes[ax];
    const int n = d.grid[ax];
    const double len = d.lengths[ax];
    const double w = len / n;
    cell_volume_ *= w;
    nodes_[ax].resize(static_cast<std::size_t>(n));
    synth_[ax].resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
    anal_[ax].resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double x = (j + 0.5) * w;
      nodes_[ax][static_cast<std::size_t>(j)] = x;
      for (int k = 0; k < m; ++k) {
        const double e = basis_value(len, k, x);
        synth_[ax][static_cast<std::size_t>(j * m + k)] = e;
        anal_[ax][static_cast<std::size_t>(k * n + j)] = w * e;
      }
    }
  }
}

void SpectralBasis::apply_inverse(const std::vector<double>& in, std::vector<double>& out) const {
  const auto& d = domain_;
  const int m0 = d.modes[0];
  const int n0 = d.grid[0];
  if (d.dim == 1) {
    out.assign(static_cast<std::size_t>(n0), 0.0);
    for (int j = 0; j < n0; ++j) {
      const double* row = &synth_[0][static_cast<std::size_t>(j * m0)];
      double acc = 0.0;
      for (int k = 0; k < m0; ++k) acc += row[k] * in[static_cast<std::size_t>(k)];
      out[static_cast<std::size_t>(j)] = acc;
    }
    return;
  }
  const int m1 = d.modes[1];
  const int n1 = d.grid[1];
  // Axis 1 first: tmp[k0][j1], then axis 0.
  std::vector<double> tmp(static_cast<std::size_t>(m0 * n1), 0.0);
  for (int k0 = 0; k0 < m0; ++k0)
    for (int j1 = 0; j1 < n1; ++j1) {
      const double* row = &synth_[1][static_cast<std::size_t>(j1 * m1)];
      const double* c = &in[static_cast<std::size_t>(k0 * m1)];
      double acc = 0.0;
      for (int k1 = 0; k1 < m1; ++k1) acc += row[k1] * c[k1];
      tmp[static_cast<std::size_t>(k0 * n1 + j1)] = acc;
    }
  out.assign(static_cast<std::size_t>(n0 * n1), 0.0);
  for (int j0 = 0; j0 < n0; ++j0) {
    const double* row = &synth_[0][static_cast<std::size_t>(j0 * m0)];
    double* o = &out[static_cast<std::size_t>(j0 * n1)];
    for (int k0 = 0; k0 < m0; ++k0) {
      const double e = row[k0];
      const double* t = &tmp[static_cast<std::size_t>(k0 * n1)];
      for (int j1 = 0; j1 < n1; ++j1) o[j1] += e * t[j1];
    }
  }
}

void SpectralBasis::apply_forward(const std::vector<double>& in, std::vector<double>& out) const {
  const auto& d = domain_;
  const int m0 = d.modes[0];
  const int n0 = d.grid[0];
  if (d.dim == 1) {
    out.assign(static_cast<std::size_t>(m0), 0.0);
    for (int k = 0; k < m0; ++k) {
      const double* row = &anal_[0][static_cast<std::size_t>(k * n0)];
      double acc = 0.0;
      for (int j = 0; j < n0; ++j) acc += row[j] * in[static_cast<std::size_t>(j)];
      out[static_cast<std::size_t>(k)] = acc;
    }
    return;
  }
  const int m1 = d.modes[1];
  const int n1 = d.grid[1];
  std::vector<double> tmp(static_cast<std::size_t>(n0 * m1), 0.0);
  for (int j0 = 0; j0 < n0; ++j0)
    for (int k1 = 0; k1 < m1; ++k1) {
      const double* row = &anal_[1][static_cast<std::size_t>(k1 * n1)];
      const double* g = &in[static_cast<std::size_t>(j0 * n1)];
      double acc = 0.0;
      for (int j1 = 0; j1 < n1; ++j1) acc += row[j1] * g[j1];
      tmp[static_cast<std::size_t>(j0 * m1 + k1)] = acc;
    }
  out.assign(static_cast<std::size_t>(m0 * m1), 0.0);
  for (int k0 = 0; k0 < m0; ++k0) {
    const double* row = &anal_[0][static_cast<std::size_t>(k0 * n0)];
    double* o = &out[static_cast<std::size_t>(k0 * m1)];
    for (int j0 = 0; j0 < n0; ++j0) {
      const double w = row[j0];
      const double* t = &tmp[static_cast<std::size_t>(j0 * m1)];
      for (int k1 = 0; k1 < m1; ++k1) o[k1] += w * t[k1];
    }
  }
}

GridField SpectralBasis::inverse(const SpectralField& v) const {
  if (!v.domain.same_space(domain_) || v.coeffs.size() != domain_.mode_count())
    throw ShapeError("inverse: field does not match the basis domain");
  GridField g(domain_);
  apply_inverse(v.coeffs, g.values);
  return g;
}

SpectralField SpectralBasis::forward(const GridField& g) const {
  if (g.values.size() != domain_.grid_count() || !g.domain.same_space(domain_) ||
      g.domain.grid != domain_.grid)
    throw ShapeError("forward: grid field does not match the basis grid");
  SpectralField v(domain_);
  apply_forward(g.values, v.coeffs);
  return v;
}

SpectralField SpectralBasis::nonlinear_apply(const SpectralField& v,
                                             const std::function<double(double)>& fn) const {
  GridField g = inverse(v);
  for (double& x : g.values) x = fn(x);
  if (!g.all_finite()) throw NumericalOverflowError("nonlinear_apply: non-finite grid values");
  return forward(g);
}

double SpectralBasis::integrate(const GridField& g) const {
  double acc = 0.0;
  for (double x : g.values) acc += x;
  return acc * cell_volume_;
}

// ---------------------------------------------------------------- operators

SpectralField project(const SpectralField& v, const MultiIndex& n) {
  SpectralField out = v;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    const MultiIndex k = v.domain.unflatten(i);
    if (k[0] >= n[0] || (v.domain.dim == 2 && k[1] >= n[1])) out.coeffs[i] = 0.0;
  }
  return out;
}

SpectralField project(const SpectralField& v, int n) { return project(v, MultiIndex{n, n}); }

SpectralField laplacian(const SpectralField& v) {
  SpectralField out = v;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= -v.domain.eigenvalue(i);
  return out;
}

double mean(const SpectralField& v) { return v.coeffs[0] / std::sqrt(v.domain.volume()); }

}  // namespace hyperch
