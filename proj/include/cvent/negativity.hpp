#pragma once
// PPT separability, negativities and the symmetric-state entanglement of formation.
// All of them are functions of the smallest partially transposed symplectic eigenvalue.

#include <cmath>
#include <optional>
#include <sstream>

#include "cvent/covariance.hpp"
#include "cvent/error.hpp"

namespace cvent {

enum class LogBase { two, e };

template <typename Scalar>
Scalar log_in(Scalar x, LogBase base) {
  using std::log;
  using std::log2;
  return base == LogBase::two ? log2(x) : log(x);
}

namespace defaults {
inline constexpr double ppt_tol = 1e-12;
/// |a - b| <= tol · max(a, b) counts as symmetric.
inline constexpr double symmetric_tol = 1e-9;
}  // namespace defaults

template <typename Scalar>
bool is_separable_ppt(const SymplecticSpectrum<Scalar>& spectrum,
                      Scalar tol = Scalar(defaults::ppt_tol)) {
  return spectrum.nu_tilde_minus >= Scalar(1) - tol;
}

namespace detail {
template <typename Scalar>
void require_positive_nu(Scalar nu_tilde_minus) {
  if (!(nu_tilde_minus > Scalar(0))) {
    std::ostringstream msg;
    msg << "partially transposed symplectic eigenvalue must be positive, got " << nu_tilde_minus;
    throw DomainError(msg.str());
  }
}
}  // namespace detail

/// N = max[0, (1 - ν̃₋) / (2 ν̃₋)].
template <typename Scalar>
Scalar negativity(Scalar nu_tilde_minus) {
  detail::require_positive_nu(nu_tilde_minus);
  if (nu_tilde_minus >= Scalar(1)) return Scalar(0);
  return (Scalar(1) - nu_tilde_minus) / (Scalar(2) * nu_tilde_minus);
}

/// E_N = max[0, -log ν̃₋].
template <typename Scalar>
Scalar log_negativity(Scalar nu_tilde_minus, LogBase base = LogBase::two) {
  detail::require_positive_nu(nu_tilde_minus);
  if (nu_tilde_minus >= Scalar(1)) return Scalar(0);
  return -log_in(nu_tilde_minus, base);
}

/// h(x) = u log u - v log v with u = (1+x)²/(4x), v = (1-x)²/(4x) = u - 1.
///
/// Evaluated as log u + v·log1p(1/v), which stays accurate as x -> 0⁺ where
/// both terms grow like log(1/x); v log v -> 0 at x = 1.
template <typename Scalar>
Scalar h_function(Scalar x, LogBase base = LogBase::two) {
  using std::log;
  using std::log1p;
  if (!(x > Scalar(0))) {
    std::ostringstream msg;
    msg << "h(x) needs x > 0, got " << x;
    throw DomainError(msg.str());
  }
  const Scalar v = (Scalar(1) - x) * (Scalar(1) - x) / (Scalar(4) * x);
  const Scalar u = (Scalar(1) + x) * (Scalar(1) + x) / (Scalar(4) * x);
  Scalar nats = log(u);
  if (v > Scalar(0)) nats += v * log1p(Scalar(1) / v);
  // h is decreasing with h(1) = 0, so the sign tracks which side of 1 we are on.
  if (x > Scalar(1)) nats = -nats;
  return base == LogBase::two ? nats / log(Scalar(2)) : nats;
}

/// Entanglement of formation of a symmetric two-mode state: max[0, h(ν̃₋)].
template <typename Scalar>
Scalar eof_symmetric(const StandardForm<Scalar>& sf, LogBase base = LogBase::two,
                     Scalar sym_tol = Scalar(defaults::symmetric_tol),
                     Scalar tol = Scalar(defaults::physicality_tol)) {
  if (!sf.is_symmetric(sym_tol)) {
    std::ostringstream msg;
    msg << "closed-form entanglement of formation needs a symmetric state (a = " << sf.a
        << ", b = " << sf.b << ")";
    throw NotApplicable(msg.str());
  }
  const Scalar nu = symplectic_spectrum(sf, tol).nu_tilde_minus;
  if (nu >= Scalar(1)) return Scalar(0);
  return std::max(Scalar(0), h_function(nu, base));
}

template <typename Scalar = double>
struct NegativityReport {
  bool separable{true};
  Scalar negativity{0};
  Scalar log_negativity{0};
  std::optional<Scalar> eof_symmetric;
  LogBase log_base{LogBase::two};
};

template <typename Scalar>
NegativityReport<Scalar> negativity_report(const StandardForm<Scalar>& sf,
                                           LogBase base = LogBase::two,
                                           Scalar tol = Scalar(defaults::physicality_tol)) {
  const auto spectrum = symplectic_spectrum(sf, tol);
  NegativityReport<Scalar> report;
  report.log_base = base;
  report.separable = is_separable_ppt(spectrum);
  if (!report.separable) {
    report.negativity = negativity(spectrum.nu_tilde_minus);
    report.log_negativity = log_negativity(spectrum.nu_tilde_minus, base);
  }
  if (sf.is_symmetric(Scalar(defaults::symmetric_tol))) {
    report.eof_symmetric = report.separable ? Scalar(0) : eof_symmetric(sf, base);
  }
  return report;
}

}  // namespace cvent
