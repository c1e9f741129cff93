#pragma once
// The (s, d, g, λ) family of entangled two-mode standard forms: local mixednesses
// a = s + d, b = s - d, global mixedness g = √Det σ, and λ in [-1, 1] interpolating
// between the states of minimal (λ = -1) and maximal (λ = +1) negativity at fixed
// purities. Closed-form single-mode determinants for the extremal classes and the
// comparison of their ordering.

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "cvent/covariance.hpp"
#include "cvent/error.hpp"
#include "cvent/gaussian_em.hpp"
#include "cvent/negativity.hpp"

namespace cvent {

template <typename Scalar = double>
struct ExtremalParams {
  Scalar s{1};
  Scalar d{0};
  Scalar g{1};
  Scalar lambda{1};
};

namespace defaults {
/// Relative slack on the parameter constraints s >= 1, |d| <= s - 1, g >= 2|d| + 1.
inline constexpr double param_tol = 1e-12;
}  // namespace defaults

template <typename Scalar>
std::optional<std::string> param_violation(const ExtremalParams<Scalar>& p,
                                           Scalar tol = Scalar(defaults::param_tol)) {
  using std::abs;
  std::ostringstream msg;
  for (const Scalar v : {p.s, p.d, p.g, p.lambda}) {
    if (!std::isfinite(static_cast<double>(v))) return std::string("non-finite parameter");
  }
  const Scalar slack = tol * std::max(Scalar(1), p.s);
  if (p.s < Scalar(1) - slack) {
    msg << "s >= 1 violated (s = " << p.s << ")";
  } else if (abs(p.d) > p.s - Scalar(1) + slack) {
    msg << "|d| <= s - 1 violated (d = " << p.d << ", s = " << p.s << ")";
  } else if (p.g < Scalar(2) * abs(p.d) + Scalar(1) - slack) {
    msg << "g >= 2|d| + 1 violated (g = " << p.g << ", d = " << p.d << ")";
  } else if (p.lambda < Scalar(-1) || p.lambda > Scalar(1)) {
    msg << "-1 <= λ <= 1 violated (λ = " << p.lambda << ")";
  } else {
    return std::nullopt;
  }
  return msg.str();
}

namespace detail {
template <typename Scalar>
void require_params(const ExtremalParams<Scalar>& p) {
  if (auto why = param_violation(p)) throw DomainError("invalid extremal parameters: " + *why);
}
}  // namespace detail

/// Standard form of the (s, d, g, λ) state:
///   c± = [√t1 ± √t2] / (4√(s² - d²)),
///   tk = [4xk² + ½(g² + 1)(λ - 1) - (2d² + g)(λ + 1)]² - 4g²,  x1 = d, x2 = s.
/// t1 vanishes identically at λ = +1; roundoff negatives are clamped.
template <typename Scalar>
StandardForm<Scalar> build_state(const ExtremalParams<Scalar>& p, double branch_clamp = 1e-12) {
  using std::abs;
  using std::sqrt;
  detail::require_params(p);
  const Scalar s = p.s, d = p.d, g = p.g, l = p.lambda;
  // Outer radicands r² - 4g² as (r + 2g)(r - 2g), with both factors in closed form so
  // that the zeros at g = 2|d| + 1 and λ = 1 are exact.
  const Scalar u = (Scalar(1) - l) / Scalar(2), ad = abs(d);
  const Scalar ab = (s - d) * (s + d);
  const Scalar r1_plus = u * (Scalar(2) * ad - g + Scalar(1)) * (Scalar(2) * ad + g - Scalar(1));
  const Scalar r1_minus = u * (Scalar(2) * ad - g - Scalar(1)) * (Scalar(2) * ad + g + Scalar(1)) -
                          Scalar(2) * g * (Scalar(1) + l);
  Scalar t1 = r1_plus * r1_minus;
  Scalar t2 = (Scalar(4) * ab + r1_plus) * (Scalar(4) * ab + r1_minus);
  const Scalar scale = std::max(Scalar(4) * g * g, Scalar(16) * ab * ab);
  if (t1 < Scalar(0) && t1 >= -Scalar(branch_clamp) * scale) t1 = Scalar(0);
  if (t2 < Scalar(0) && t2 >= -Scalar(branch_clamp) * scale) t2 = Scalar(0);
  if (t1 < Scalar(0) || t2 < Scalar(0)) {
    std::ostringstream msg;
    msg << "parametrization has no real covariances at (s, d, g, λ) = (" << s << ", " << d << ", "
        << g << ", " << l << "): outer square-root argument " << std::min(t1, t2)
        << " < 0 (the state is outside the entangled window)";
    throw DomainError(msg.str());
  }
  if (!(ab > Scalar(0))) throw DomainError("s² - d² must be positive");
  const Scalar denom = Scalar(4) * sqrt(ab);
  return {s + d, s - d, (sqrt(t1) + sqrt(t2)) / denom, (sqrt(t1) - sqrt(t2)) / denom};
}

/// Recovers (s, d, g) from a standard form's purities; λ is not recovered.
template <typename Scalar>
ExtremalParams<Scalar> mixedness_params(const StandardForm<Scalar>& sf) {
  using std::sqrt;
  const auto inv = invariants(sf);
  return {(sf.a + sf.b) / Scalar(2), (sf.a - sf.b) / Scalar(2), sqrt(inv.det_sigma), Scalar(0)};
}

enum class Entanglement { entangled, separable };

inline std::string_view to_string(Entanglement e) {
  return e == Entanglement::entangled ? "entangled" : "separable";
}

/// g below which the λ = -1 state is entangled: √(2(s² + d²) - 1).
template <typename Scalar>
Scalar glems_threshold(Scalar s, Scalar d) {
  using std::sqrt;
  return sqrt(Scalar(2) * (s * s + d * d) - Scalar(1));
}

/// g below which the λ = +1 state is entangled: 2s - 1.
template <typename Scalar>
Scalar gmems_threshold(Scalar s) {
  return Scalar(2) * s - Scalar(1);
}

template <typename Scalar>
Entanglement classify_entanglement(const ExtremalParams<Scalar>& p) {
  detail::require_params(p);
  if (p.lambda == Scalar(1)) {
    return p.g < gmems_threshold(p.s) ? Entanglement::entangled : Entanglement::separable;
  }
  if (p.lambda == Scalar(-1)) {
    return p.g < glems_threshold(p.s, p.d) ? Entanglement::entangled : Entanglement::separable;
  }
  // Every λ lies between the two extremes, so beyond 2s - 1 nothing is entangled.
  if (p.g >= gmems_threshold(p.s)) return Entanglement::separable;
  const auto spectrum = symplectic_spectrum(build_state(p));
  return is_separable_ppt(spectrum) ? Entanglement::separable : Entanglement::entangled;
}

namespace detail {
template <typename Scalar>
Scalar clamped_sqrt(Scalar x, Scalar scale, const char* what) {
  using std::sqrt;
  return sqrt(clamp_radicand(x, scale, 1e-12, what));
}
}  // namespace detail

/// Optimal single-mode determinant of the λ = +1 states:
///   m = 1 for g >= 2s - 1, else
///   m = [(g + 1)s - √(((g - 1)² - 4d²)(s² - d² - g))]² / (4(d² + g)²).
template <typename Scalar>
Scalar m_opt_gmems(const ExtremalParams<Scalar>& p) {
  using std::abs;
  detail::require_params(p);
  const Scalar s = p.s, d = abs(p.d), g = p.g;
  if (g >= gmems_threshold(s)) return Scalar(1);
  const Scalar left = (g - Scalar(1)) * (g - Scalar(1)) - Scalar(4) * d * d;
  const Scalar right = s * s - d * d - g;
  const Scalar root =
      detail::clamped_sqrt(left * right, std::max(Scalar(1), g * g * s * s), "m_opt_gmems");
  const Scalar num = (g + Scalar(1)) * s - root;
  const Scalar den = Scalar(2) * (d * d + g);
  return std::max(Scalar(1), num * num / (den * den));
}

/// g at which the optimal decomposition of the λ = -1 state switches between
/// the two nontrivial closed forms.
template <typename Scalar>
Scalar glems_branch_point(Scalar s, Scalar d) {
  using std::abs;
  using std::sqrt;
  d = abs(d);
  const Scalar d2 = d * d, s2 = s * s;
  const Scalar inner = (s2 + Scalar(1)) * d2 + s2;
  return sqrt(((Scalar(4) * s2 + Scalar(1)) * d2 + s2 + Scalar(4) * s * d * sqrt(inner)) / (d2 + s2));
}

/// Optimal single-mode determinant of the λ = -1 states:
///   m = 1                                   for g >= √(2(s² + d²) - 1),
///   m = 16 s² d² / (g² - 1)²                for g below glems_branch_point,
///   m = [-g⁴ + 2(2d² + 2s² + 1)g² - (4d² - 1)(4s² - 1) - √δ] / (8g²)  otherwise,
/// with δ the product of the eight factors (2d ± g ± 1)(g ± 2s ± 1).
template <typename Scalar>
Scalar m_opt_glems(const ExtremalParams<Scalar>& p) {
  using std::abs;
  detail::require_params(p);
  const Scalar s = p.s, d = abs(p.d), g = p.g;
  if (g >= glems_threshold(s, d)) return Scalar(1);
  const Scalar g2 = g * g;
  if (g < glems_branch_point(s, d)) {
    const Scalar den = g2 - Scalar(1);
    return std::max(Scalar(1), Scalar(16) * s * s * d * d / (den * den));
  }
  const Scalar one(1), two(2);
  const Scalar delta = (two * d - g - one) * (two * d - g + one) * (two * d + g - one) *
                       (two * d + g + one) * (g - two * s - one) * (g - two * s + one) *
                       (g + two * s - one) * (g + two * s + one);
  const Scalar lead = -g2 * g2 + two * (two * d * d + two * s * s + one) * g2 -
                      (Scalar(4) * d * d - one) * (Scalar(4) * s * s - one);
  const Scalar root = detail::clamped_sqrt(delta, std::max(one, lead * lead), "m_opt_glems");
  return std::max(one, (lead - root) / (Scalar(8) * g2));
}

/// Optimal single-mode determinant of the g = 2|d| + 1 states, written through
/// their negativity: m = (2s / (1 - ν̃² + 2ν̃s))².
template <typename Scalar>
Scalar m_opt_gmemms(Scalar s, Scalar nu_tilde_minus) {
  const Scalar nu = nu_tilde_minus;
  if (!(nu > Scalar(0) && nu < Scalar(1))) {
    std::ostringstream msg;
    msg << "0 < ν̃₋ < 1 violated (ν̃₋ = " << nu << ")";
    throw DomainError(msg.str());
  }
  const Scalar s_min = (Scalar(1) + nu * nu) / (Scalar(2) * nu);
  if (s < s_min * (Scalar(1) - Scalar(defaults::param_tol))) {
    std::ostringstream msg;
    msg << "s >= (1 + ν̃₋²)/(2ν̃₋) violated (s = " << s << ", bound " << s_min << ")";
    throw DomainError(msg.str());
  }
  const Scalar ratio = Scalar(2) * s / (Scalar(1) - nu * nu + Scalar(2) * nu * s);
  return ratio * ratio;
}

/// Supremum over s of m_opt_gmemms at fixed ν̃₋: 1/ν̃₋².
template <typename Scalar>
Scalar m_max(Scalar nu_tilde_minus) {
  if (!(nu_tilde_minus > Scalar(0) && nu_tilde_minus <= Scalar(1))) {
    std::ostringstream msg;
    msg << "0 < ν̃₋ <= 1 violated (ν̃₋ = " << nu_tilde_minus << ")";
    throw DomainError(msg.str());
  }
  return Scalar(1) / (nu_tilde_minus * nu_tilde_minus);
}

enum class Regime { ordering_preserved, ordering_inverted, coexistence, both_separable, unphysical };

inline std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::ordering_preserved: return "ordering_preserved";
    case Regime::ordering_inverted: return "ordering_inverted";
    case Regime::coexistence: return "coexistence";
    case Regime::both_separable: return "both_separable";
    case Regime::unphysical: return "unphysical";
  }
  return "unknown";
}

template <typename Scalar = double>
struct OrderingVerdict {
  Scalar m_gmems{1};
  Scalar m_glems{1};
  Regime regime{Regime::both_separable};
  /// d < 0 was handled by relabelling the modes.
  bool modes_swapped{false};
};

/// Physical (s, d, g): the constraints on the parameters and Det σ <= Det α Det β.
template <typename Scalar>
bool physical_mixedness(Scalar s, Scalar d, Scalar g) {
  const ExtremalParams<Scalar> p{s, d, g, Scalar(1)};
  return !param_violation(p).has_value() && g <= (s * s - d * d) * (Scalar(1) + Scalar(defaults::param_tol));
}

template <typename Scalar>
OrderingVerdict<Scalar> ordering_compare(Scalar s, Scalar d, Scalar g) {
  constexpr Scalar nan = std::numeric_limits<Scalar>::quiet_NaN();
  OrderingVerdict<Scalar> v;
  v.modes_swapped = d < Scalar(0);
  if (!physical_mixedness(s, d, g)) return {nan, nan, Regime::unphysical, v.modes_swapped};
  v.m_gmems = m_opt_gmems(ExtremalParams<Scalar>{s, d, g, Scalar(1)});
  v.m_glems = m_opt_glems(ExtremalParams<Scalar>{s, d, g, Scalar(-1)});
  if (classify_entanglement(ExtremalParams<Scalar>{s, d, g, Scalar(1)}) == Entanglement::separable) {
    v.regime = Regime::both_separable;
  } else if (classify_entanglement(ExtremalParams<Scalar>{s, d, g, Scalar(-1)}) ==
             Entanglement::separable) {
    v.regime = Regime::coexistence;
  } else {
    v.regime = v.m_gmems >= v.m_glems ? Regime::ordering_preserved : Regime::ordering_inverted;
  }
  return v;
}

}  // namespace cvent
