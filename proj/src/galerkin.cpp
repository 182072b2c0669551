// galerkin.cpp

#include "hyperch/galerkin.hpp"

#include <algorithm>
#include <sstream>

#include "hyperch/error.hpp"

namespace hyperch {

// --------------------------------------------------------------- ForcingSpec

ForcingSpec::ForcingSpec(Variant v) : v_(std::move(v)) {
  if (const auto* s = std::get_if<SpectralSeriesForcing>(&v_)) {
    if (s->times.empty() || s->times.size() != s->samples.size())
      throw ArgumentError("forcing: spectral series needs one sample per time");
    for (std::size_t i = 1; i < s->times.size(); ++i)
      if (!(s->times[i] > s->times[i - 1]))
        throw ArgumentError("forcing: spectral series times must increase strictly");
    for (const auto& f : s->samples)
      if (!f.all_finite()) throw ArgumentError("forcing: non-finite spectral sample");
  }
  if (const auto* c = std::get_if<CallableForcing>(&v_); c && !c->fn)
    throw ArgumentError("forcing: empty callable");
}

SpectralField ForcingSpec::evaluate(double t, const DomainSpec& d) const {
  return std::visit(
      [&](const auto& f) -> SpectralField {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ZeroForcing>) {
          return SpectralField(d);
        } else if constexpr (std::is_same_v<T, ConstantForcing>) {
          return SpectralField::constant(d, f.value);
        } else if constexpr (std::is_same_v<T, SpectralSeriesForcing>) {
          const auto& ts = f.times;
          SpectralField out(d);
          const SpectralField* a = &f.samples.front();
          const SpectralField* b = a;
          double theta = 0.0;
          if (t >= ts.back()) {
            a = b = &f.samples.back();
          } else if (t > ts.front()) {
            const auto it = std::upper_bound(ts.begin(), ts.end(), t);
            const auto i = static_cast<std::size_t>(it - ts.begin());
            a = &f.samples[i - 1];
            b = &f.samples[i];
            theta = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
          }
          require_same_space(out, *a, "forcing");
          for (std::size_t k = 0; k < out.coeffs.size(); ++k)
            out.coeffs[k] = (1.0 - theta) * a->coeffs[k] + theta * b->coeffs[k];
          return out;
        } else {
          SpectralField g = f.fn(t);
          require_same_space(SpectralField(d), g, "forcing");
          return g;
        }
      },
      v_);
}

std::string ForcingSpec::describe() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ZeroForcing>)
          os << "zero";
        else if constexpr (std::is_same_v<T, ConstantForcing>)
          os << "constant(" << f.value << ")";
        else if constexpr (std::is_same_v<T, SpectralSeriesForcing>)
          os << "spectral series (" << f.times.size() << " samples)";
        else
          os << "callable(" << f.label << ")";
      },
      v_);
  return os.str();
}

// ------------------------------------------------------------ GalerkinSystem

GalerkinSystem::GalerkinSystem(const DomainSpec& domain, PotentialSpec potential,
                               ForcingSpec forcing, MultiIndex retained)
    : basis_(domain), potential_(std::move(potential)), forcing_(std::move(forcing)) {
  retained_ = {retained[0] > 0 ? retained[0] : domain.modes[0],
               retained[1] > 0 ? retained[1] : domain.modes[1]};
  if (retained_[0] > domain.modes[0] || (domain.dim == 2 && retained_[1] > domain.modes[1]))
    throw ArgumentError("galerkin: retained mode count exceeds the domain modes");

  const auto& eig = basis_.eigenvalues();
  const double lam = potential_.lambda();
  const double nu = potential_.nu();
  stiffness_.resize(eig.size());
  keep_.resize(eig.size());
  for (std::size_t i = 0; i < eig.size(); ++i) {
    stiffness_[i] = potential_.sigma() + eig[i] * (eig[i] - lam) * (eig[i] + nu - lam);
    const MultiIndex k = domain.unflatten(i);
    keep_[i] = k[0] < retained_[0] && (domain.dim == 1 || k[1] < retained_[1]);
  }
}

double GalerkinSystem::linear_stiffness(const MultiIndex& k) const {
  if (!domain().contains(k)) throw ArgumentError("linear_stiffness: index out of range");
  return stiffness_[domain().flatten(k)];
}

void GalerkinSystem::check_input(const SpectralField& phi, const char* where) const {
  if (!phi.domain.same_space(domain()) || phi.coeffs.size() != domain().mode_count())
    throw ShapeError(std::string(where) + ": field does not match the system domain");
}

GalerkinSystem::GridTerms GalerkinSystem::grid_terms(const SpectralField& phi) const {
  GridTerms out{SpectralField(domain()), SpectralField(domain())};
  if (potential_.beta_is_zero()) return out;

  const auto& eig = eigenvalues();
  const double lam = potential_.lambda();
  SpectralField lin(domain());
  for (std::size_t i = 0; i < lin.coeffs.size(); ++i)
    lin.coeffs[i] = (eig[i] - lam) * phi.coeffs[i];

  GridField pg = basis_.inverse(phi);
  GridField wg = basis_.inverse(lin);
  GridField bg(domain());
  for (std::size_t j = 0; j < pg.values.size(); ++j) {
    const double s = pg.values[j];
    const double b = beta_eval(potential_, s, 0);
    const double w = wg.values[j] + b;  // full w = -Delta phi + beta(phi) - lambda phi
    bg.values[j] = b;
    wg.values[j] = beta_eval(potential_, s, 1) * w;
  }
  if (!bg.all_finite() || !wg.all_finite())
    throw NumericalOverflowError("galerkin: non-finite beta(phi) on the grid");
  out.beta_proj = basis_.forward(bg);
  out.product_proj = basis_.forward(wg);
  for (std::size_t i = 0; i < keep_.size(); ++i)
    if (!keep_[i]) out.beta_proj.coeffs[i] = out.product_proj.coeffs[i] = 0.0;
  return out;
}

ChemicalFields GalerkinSystem::chemical(const SpectralField& phi) const {
  check_input(phi, "chemical");
  const GridTerms gt = grid_terms(phi);
  const auto& eig = eigenvalues();
  const double lam = potential_.lambda();
  const double nu = potential_.nu();
  ChemicalFields out{SpectralField(domain()), SpectralField(domain())};
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (!keep_[i]) continue;
    const double w = (eig[i] - lam) * phi.coeffs[i] + gt.beta_proj.coeffs[i];
    out.w.coeffs[i] = w;
    out.mu.coeffs[i] = (eig[i] + nu - lam) * w + gt.product_proj.coeffs[i];
  }
  return out;
}

SpectralField GalerkinSystem::compute_w(const SpectralField& phi) const { return chemical(phi).w; }

SpectralField GalerkinSystem::compute_mu(const SpectralField& phi) const {
  return chemical(phi).mu;
}

SpectralField GalerkinSystem::forcing_at(double t) const {
  return truncate(forcing_.evaluate(t, domain()));
}

SpectralField GalerkinSystem::rhs_first_equation(const SpectralField& phi, double t) const {
  const SpectralField mu = compute_mu(phi);
  SpectralField out = forcing_at(t);
  const auto& eig = eigenvalues();
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (!keep_[i]) continue;
    out.coeffs[i] -= potential_.sigma() * phi.coeffs[i] + eig[i] * mu.coeffs[i];
  }
  return out;
}

SpectralField GalerkinSystem::nonlinear_remainder(const SpectralField& phi) const {
  check_input(phi, "nonlinear_remainder");
  const GridTerms gt = grid_terms(phi);
  const auto& eig = eigenvalues();
  const double lam = potential_.lambda();
  const double nu = potential_.nu();
  const double sign = sign_fault_ ? -1.0 : 1.0;
  SpectralField out(domain());
  for (std::size_t i = 0; i < eig.size(); ++i) {
    if (!keep_[i]) continue;
    out.coeffs[i] = sign * eig[i] *
                    ((eig[i] + nu - lam) * gt.beta_proj.coeffs[i] + gt.product_proj.coeffs[i]);
  }
  return out;
}

}  // namespace hyperch
