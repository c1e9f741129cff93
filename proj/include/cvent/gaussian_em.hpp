#pragma once
// Gaussian entanglement measures of two-mode states.
//
// The optimal pure state σᴾ = Γ ⊕ Γ⁻¹ below σ lies on the rim where both
// γ_p⁻¹ <= Γ and Γ <= γ_q are saturated. Writing Γ = [[x0 + x3, x1], [x1, x0 - x3]],
// the rim is an ellipse in Minkowski space (x0, x1, x3) and every Gaussian EM is a
// monotone function of the single-mode determinant m = 1 + x1² / det Γ, which is
// minimized over the polar angle θ of the ellipse.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "cvent/covariance.hpp"
#include "cvent/error.hpp"
#include "cvent/golden_section.hpp"
#include "cvent/negativity.hpp"

namespace cvent {

struct EmOptions {
  int seed_grid = 720;
  double theta_tol = 1e-12;
  /// ν̃₋ in [1 - near_separable, 1] is reported as separable (m_opt = 1).
  double near_separable = 1e-8;
  /// Physicality slack |1 + Det σ - Δ| below this (relative to max(1, Det σ)) is
  /// treated as exactly zero, i.e. the state sits on ν₋ = 1.
  double min_uncertainty_snap = 1e-12;
  /// Radicands in [-branch_clamp, 0) are clamped to zero.
  double branch_clamp = 1e-12;
  double physicality_tol = defaults::physicality_tol;
  double ppt_tol = defaults::ppt_tol;
  double symmetric_tol = defaults::symmetric_tol;
  bool symmetric_shortcut = true;
  LogBase log_base = LogBase::two;
};

template <typename Scalar = double>
struct GammaCoordinates {
  Scalar x0{1};
  Scalar x1{0};
  Scalar x3{0};

  Scalar det() const { return x0 * x0 - x1 * x1 - x3 * x3; }

  Matrix2<Scalar> matrix() const {
    Matrix2<Scalar> g;
    g << x0 + x3, x1, x1, x0 - x3;
    return g;
  }

  /// Single-mode determinant of the pure state Γ ⊕ Γ⁻¹.
  Scalar single_mode_det() const { return Scalar(1) + x1 * x1 / det(); }

  static GammaCoordinates from_matrix(const Matrix2<Scalar>& g) {
    return {(g(0, 0) + g(1, 1)) / Scalar(2), (g(0, 1) + g(1, 0)) / Scalar(2),
            (g(0, 0) - g(1, 1)) / Scalar(2)};
  }
};

template <typename Scalar = double>
struct GemResult {
  Scalar m_opt{1};
  Scalar theta_opt{0};
  Scalar nu_tilde_opt{1};
  Scalar gaussian_eof{0};
  int extrema_found{1};
  bool separable{true};
  bool symmetric_closed_form{false};
};

/// ν̃₋ of a pure state with single-mode determinant m: √m - √(m - 1).
template <typename Scalar>
Scalar nu_tilde_from_m(Scalar m) {
  using std::sqrt;
  if (m < Scalar(1)) throw DomainError("single-mode determinant below 1");
  return Scalar(1) / (sqrt(m) + sqrt(m - Scalar(1)));
}

/// Inverse of nu_tilde_from_m: ((ν + 1/ν) / 2)².
template <typename Scalar>
Scalar m_from_nu_tilde(Scalar nu) {
  if (!(nu > Scalar(0))) throw DomainError("symplectic eigenvalue must be positive");
  const Scalar half = (nu + Scalar(1) / nu) / Scalar(2);
  return half * half;
}

namespace detail {

template <typename Scalar>
struct Wider {
  using type = Scalar;
};
template <>
struct Wider<double> {
  using type = long double;
};

template <typename Scalar>
Scalar clamp_radicand(Scalar value, Scalar scale, double clamp, const char* what) {
  if (value >= Scalar(0)) return value;
  if (value >= -Scalar(clamp) * std::max(Scalar(1), scale)) return Scalar(0);
  std::ostringstream msg;
  msg << "negative radicand " << value << " in " << what;
  throw DomainError(msg.str());
}

}  // namespace detail

/// m_θ(a, b, c+, c-) on the rim, in the form
///
///   m_θ = 1 + (n0 + n1 cos θ)² / (2D (p0 + pc cos θ + ps sin θ)),   D = ab - c-².
///
/// with n0 = c+D - c-, n1 = √R, p0 = a² + b² + 2c+c-, ps = (a² - b²)·√(D·slack / R)
/// and pc = -K/√R for the quartic K of the closed form. The coefficients are
/// evaluated through R = (a - bD)(b - aD) = D·slack + (c+D + c-)² and
/// -K = (c+D + c-)(Det σ - 1) - slack·(c+D - c-), with slack = 1 + Det σ - Δ,
/// which stay finite as the rim shrinks to a point (pure states).
template <typename Scalar = double>
class MTheta {
 public:
  explicit MTheta(const StandardForm<Scalar>& input, const EmOptions& opts = {}) {
    using std::sqrt;
    using Wide = typename detail::Wider<Scalar>::type;
    const StandardForm<Scalar> sf = canonical(input);
    const Wide a = sf.a, b = sf.b, cp = sf.c_plus, cm = sf.c_minus;
    const Wide d = a * b - cm * cm;
    if (!(d > Wide(0))) throw DomainError("ab - c-² must be positive on a physical state");
    const Wide det_sigma = (a * b - cp * cp) * d;
    const Wide delta = a * a + b * b + Wide(2) * cp * cm;
    Wide slack = Wide(1) + det_sigma - delta;
    const Wide scale = std::max(Wide(1), det_sigma);
    if (std::abs(slack) <= Wide(opts.min_uncertainty_snap) * scale) {
      slack = Wide(0);
    } else if (slack < Wide(0)) {
      if (slack < -Wide(opts.physicality_tol) * scale) {
        std::ostringstream msg;
        msg << "Δ(σ) <= 1 + Det σ violated by " << -static_cast<double>(slack);
        throw DomainError(msg.str());
      }
      slack = Wide(0);
    }
    const Wide sum_term = cp * d + cm;
    const Wide r = d * slack + sum_term * sum_term;
    const Wide root_r = sqrt(r);

    d_ = static_cast<Scalar>(d);
    n0_ = static_cast<Scalar>(cp * d - cm);
    n1_ = static_cast<Scalar>(root_r);
    p0_ = static_cast<Scalar>(delta);
    if (root_r > Wide(0)) {
      const Wide cos_dir = sum_term / root_r;          // in [-1, 1]
      const Wide sin_dir = sqrt(d * slack / r);        // in [0, 1]
      const Wide tau = sqrt(slack / d);
      pc_ = static_cast<Scalar>(cos_dir * (det_sigma - Wide(1)) - sin_dir * tau * (cp * d - cm));
      ps_ = static_cast<Scalar>((a * a - b * b) * sin_dir);
    }
    degenerate_ = !(root_r > Wide(0));
    // The rim stays inside det Γ > 0 iff the denominator never vanishes.
    using std::hypot;
    if (!(p0_ > hypot(pc_, ps_))) {
      std::ostringstream msg;
      msg << "m_θ denominator changes sign (p0 = " << p0_ << ", |(pc, ps)| = " << hypot(pc_, ps_)
          << "); state outside the entangled regime";
      throw DomainError(msg.str());
    }
  }

  Scalar operator()(Scalar theta) const {
    using std::cos;
    using std::sin;
    const Scalar c = cos(theta);
    const Scalar num = n0_ + n1_ * c;
    return Scalar(1) + num * num / (Scalar(2) * d_ * (p0_ + pc_ * c + ps_ * sin(theta)));
  }

  /// Rim collapsed to a single point: m_θ is constant (pure states).
  bool degenerate() const { return degenerate_; }

  Scalar n0() const { return n0_; }
  Scalar n1() const { return n1_; }
  Scalar p0() const { return p0_; }
  Scalar pc() const { return pc_; }
  Scalar ps() const { return ps_; }
  Scalar d() const { return d_; }

 private:
  Scalar d_{1}, n0_{0}, n1_{0}, p0_{1}, pc_{0}, ps_{0};
  bool degenerate_{false};
};

template <typename Scalar>
Scalar m_theta(const StandardForm<Scalar>& sf, Scalar theta, const EmOptions& opts = {}) {
  return MTheta<Scalar>(sf, opts)(theta);
}

namespace detail {

template <typename Scalar>
using Minkowski = Eigen::Matrix<Scalar, 3, 1>;

template <typename Scalar>
Minkowski<Scalar> to_minkowski(const Matrix2<Scalar>& m) {
  return {(m(0, 0) + m(1, 1)) / Scalar(2), m(0, 1), (m(0, 0) - m(1, 1)) / Scalar(2)};
}

template <typename Scalar>
Scalar minkowski_dot(const Minkowski<Scalar>& x, const Minkowski<Scalar>& y) {
  return x(0) * y(0) - x(1) * y(1) - x(2) * y(2);
}

template <typename Scalar>
void require_entangled(const StandardForm<Scalar>& sf, const EmOptions& opts) {
  const auto spectrum = symplectic_spectrum(sf, Scalar(opts.physicality_tol));
  if (is_separable_ppt(spectrum, Scalar(opts.ppt_tol))) {
    throw DomainError("state is separable: the optimal pure state is a product state, no rim");
  }
}

}  // namespace detail

/// Point of the rim γ_p⁻¹ <= Γ <= γ_q (both sides saturated) at polar angle θ,
/// using the same angle convention as MTheta.
///
/// Built directly from the light cones: with q, p the Minkowski coordinates of γ_q
/// and γ_p⁻¹ and w = q - p (timelike, w·w = τ²), the rim is the circle of radius τ/2
/// around (p + q)/2 in the rest frame of w, boosted back.
template <typename Scalar>
GammaCoordinates<Scalar> gamma_from_theta(const StandardForm<Scalar>& input, Scalar theta,
                                          const EmOptions& opts = {}) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  using V = detail::Minkowski<Scalar>;
  const StandardForm<Scalar> sf = canonical(input);
  detail::require_entangled(sf, opts);

  Matrix2<Scalar> gamma_q, gamma_p;
  gamma_q << sf.a, sf.c_plus, sf.c_plus, sf.b;
  gamma_p << sf.a, sf.c_minus, sf.c_minus, sf.b;
  const V q = detail::to_minkowski<Scalar>(gamma_q);
  const V p = detail::to_minkowski<Scalar>(gamma_p.inverse());
  const V w = q - p;
  const V centre = (p + q) / Scalar(2);

  // τ² = det(γ_q - γ_p⁻¹) = slack / D; snap with the same rule as MTheta.
  const Scalar d = sf.a * sf.b - sf.c_minus * sf.c_minus;
  const Scalar det_sigma = (sf.a * sf.b - sf.c_plus * sf.c_plus) * d;
  Scalar tau_sq = detail::minkowski_dot(w, w);
  if (std::abs(tau_sq * d) <= Scalar(opts.min_uncertainty_snap) * std::max(Scalar(1), det_sigma)) {
    tau_sq = Scalar(0);
  }
  tau_sq = detail::clamp_radicand(tau_sq, w(0) * w(0), opts.branch_clamp, "rim radius");

  const Scalar rho = sqrt(tau_sq + w(1) * w(1));
  if (!(rho > Scalar(0))) return {centre(0), centre(1), centre(2)};

  const V cos_dir = (tau_sq * V(0, 1, 0) + w(1) * w) / rho;
  const V sin_dir = sqrt(tau_sq) * V(w(2), 0, w(0)) / rho;
  const V x = centre + (cos(theta) * cos_dir + sin(theta) * sin_dir) / Scalar(2);
  return {x(0), x(1), x(2)};
}

namespace detail {

template <typename Scalar>
int count_extrema(const std::vector<Scalar>& values) {
  const std::size_t n = values.size();
  int sign_prev = 0;
  int first_sign = 0;
  int changes = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const Scalar diff = values[(k + 1) % n] - values[k];
    const int sign = diff > Scalar(0) ? 1 : (diff < Scalar(0) ? -1 : 0);
    if (sign == 0) continue;
    if (first_sign == 0) first_sign = sign;
    if (sign_prev != 0 && sign != sign_prev) ++changes;
    sign_prev = sign;
  }
  if (sign_prev != 0 && first_sign != 0 && sign_prev != first_sign) ++changes;
  return changes;
}

}  // namespace detail

/// Global minimum of m_θ over one period: seed grid + golden-section refinement of
/// every grid local minimum. Separable states short-circuit to m_opt = 1.
template <typename Scalar>
GemResult<Scalar> minimize_m(const StandardForm<Scalar>& input, const EmOptions& opts = {}) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const StandardForm<Scalar> sf = canonical(input);
  const auto spectrum = symplectic_spectrum(sf, Scalar(opts.physicality_tol));

  GemResult<Scalar> result;
  if (spectrum.nu_tilde_minus >= Scalar(1) - Scalar(opts.near_separable)) return result;
  result.separable = false;

  const MTheta<Scalar> m(sf, opts);
  if (m.degenerate()) {
    result.m_opt = m(Scalar(0));
    result.extrema_found = 1;
  } else {
    const int n = std::max(opts.seed_grid, 8);
    const Scalar step = two_pi / Scalar(n);
    std::vector<Scalar> values(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) values[static_cast<std::size_t>(k)] = m(step * Scalar(k));
    for (const Scalar v : values) {
      if (!std::isfinite(static_cast<double>(v))) {
        std::ostringstream msg;
        msg << "m_θ is not finite on the seed grid (a = " << sf.a << ", b = " << sf.b
            << ", c+ = " << sf.c_plus << ", c- = " << sf.c_minus << ")";
        throw NumericalFailure(msg.str());
      }
    }
    result.extrema_found = std::max(1, detail::count_extrema(values));

    std::vector<int> minima;
    for (int k = 0; k < n; ++k) {
      const Scalar v = values[static_cast<std::size_t>(k)];
      if (v <= values[static_cast<std::size_t>((k + n - 1) % n)] &&
          v <= values[static_cast<std::size_t>((k + 1) % n)]) {
        minima.push_back(k);
      }
    }
    if (minima.empty()) throw NumericalFailure("no local minimum bracketed on the θ seed grid");
    // A nearly flat m_θ can make every grid point a candidate; refine the lowest few.
    constexpr std::size_t max_refined = 8;
    if (minima.size() > max_refined) {
      std::partial_sort(minima.begin(), minima.begin() + max_refined, minima.end(),
                        [&](int i, int j) { return values[std::size_t(i)] < values[std::size_t(j)]; });
      minima.resize(max_refined);
    }

    result.m_opt = values[static_cast<std::size_t>(minima.front())];
    result.theta_opt = step * Scalar(minima.front());
    for (const int k : minima) {
      const Scalar centre = step * Scalar(k);
      const auto refined = golden_section_minimize(m, centre - step, centre + step,
                                                   Scalar(opts.theta_tol));
      if (refined.value < result.m_opt) {
        result.m_opt = refined.value;
        result.theta_opt = refined.x;
      }
      if (values[std::size_t(k)] < result.m_opt) {
        result.m_opt = values[std::size_t(k)];
        result.theta_opt = centre;
      }
    }
    result.theta_opt = std::fmod(result.theta_opt, two_pi);
    if (result.theta_opt < Scalar(0)) result.theta_opt += two_pi;
  }

  if (opts.symmetric_shortcut && sf.is_symmetric(Scalar(opts.symmetric_tol))) {
    result.m_opt = m_from_nu_tilde(spectrum.nu_tilde_minus);
    result.symmetric_closed_form = true;
  }
  result.m_opt = std::max(result.m_opt, Scalar(1));
  result.nu_tilde_opt = nu_tilde_from_m(result.m_opt);
  result.gaussian_eof = std::max(Scalar(0), h_function(result.nu_tilde_opt, opts.log_base));
  return result;
}

template <typename Scalar>
Scalar gaussian_eof(const StandardForm<Scalar>& sf, const EmOptions& opts = {}) {
  return minimize_m(sf, opts).gaussian_eof;
}

}  // namespace cvent
