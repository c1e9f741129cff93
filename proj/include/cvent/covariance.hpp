#pragma once
// Two-mode covariance matrices: physicality, local symplectic invariants,
// standard form, symplectic spectra and purities.
//
// Conventions: quadrature ordering (q1, p1, q2, p2), [X_i, X_j] = 2iΩ_ij, so the
// vacuum covariance matrix is the identity and every uncertainty threshold sits at 1.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "cvent/error.hpp"

namespace cvent {

template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

namespace defaults {
/// Absolute slack on the physicality inequalities, scaled by max(1, Det σ).
inline constexpr double physicality_tol = 1e-10;
/// Relative asymmetry accepted in a raw 4x4 input.
inline constexpr double matrix_symmetry_tol = 1e-12;
}  // namespace defaults

/// Symplectic form Ω = ω ⊕ ω with ω = [[0, 1], [-1, 0]].
template <typename Scalar = double>
Matrix4<Scalar> symplectic_form() {
  Matrix4<Scalar> omega = Matrix4<Scalar>::Zero();
  omega(0, 1) = omega(2, 3) = Scalar(1);
  omega(1, 0) = omega(3, 2) = Scalar(-1);
  return omega;
}

/// Standard form (a, b, c+, c-) of a two-mode CM.
template <typename Scalar = double>
struct StandardForm {
  Scalar a{1};
  Scalar b{1};
  Scalar c_plus{0};
  Scalar c_minus{0};

  Matrix4<Scalar> matrix() const {
    Matrix4<Scalar> m = Matrix4<Scalar>::Zero();
    m(0, 0) = m(1, 1) = a;
    m(2, 2) = m(3, 3) = b;
    m(0, 2) = m(2, 0) = c_plus;
    m(1, 3) = m(3, 1) = c_minus;
    return m;
  }

  bool is_symmetric(Scalar rel_tol = Scalar(1e-9)) const {
    using std::abs;
    return abs(a - b) <= rel_tol * std::max(abs(a), abs(b));
  }

  /// The same state with the two modes relabelled.
  StandardForm swapped_modes() const { return {b, a, c_plus, c_minus}; }

  friend bool operator==(const StandardForm&, const StandardForm&) = default;
};

/// A 4x4 real symmetric covariance matrix. Symmetry is checked on construction;
/// physicality is not (see validate_physical).
template <typename Scalar = double>
class CovarianceMatrix {
 public:
  CovarianceMatrix() : entries_(Matrix4<Scalar>::Identity()) {}

  explicit CovarianceMatrix(const Matrix4<Scalar>& entries,
                            Scalar sym_tol = Scalar(defaults::matrix_symmetry_tol)) {
    using std::abs;
    if (!entries.allFinite()) throw MalformedInput("covariance matrix has non-finite entries");
    const Scalar scale = std::max(Scalar(1), entries.cwiseAbs().maxCoeff());
    const Scalar asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
    if (asym > sym_tol * scale) {
      std::ostringstream msg;
      msg << "covariance matrix is not symmetric (max |σ_ij - σ_ji| = " << asym << ")";
      throw MalformedInput(msg.str());
    }
    entries_ = (entries + entries.transpose()) / Scalar(2);
  }

  explicit CovarianceMatrix(const StandardForm<Scalar>& sf) : entries_(sf.matrix()) {}

  static CovarianceMatrix vacuum() { return CovarianceMatrix(); }

  const Matrix4<Scalar>& matrix() const { return entries_; }
  Scalar operator()(int i, int j) const { return entries_(i, j); }

  Matrix2<Scalar> alpha() const { return entries_.template block<2, 2>(0, 0); }
  Matrix2<Scalar> beta() const { return entries_.template block<2, 2>(2, 2); }
  Matrix2<Scalar> gamma() const { return entries_.template block<2, 2>(0, 2); }

  /// Mirror reflection of p2; flips the sign of Det γ.
  CovarianceMatrix partial_transpose() const {
    const Eigen::DiagonalMatrix<Scalar, 4> mirror(Scalar(1), Scalar(1), Scalar(1), Scalar(-1));
    CovarianceMatrix out;
    out.entries_ = mirror * entries_ * mirror;
    return out;
  }

  /// Congruence σ -> Sᵀ σ S.
  CovarianceMatrix transformed(const Matrix4<Scalar>& s) const {
    CovarianceMatrix out;
    out.entries_ = s.transpose() * entries_ * s;
    out.entries_ = (out.entries_ + out.entries_.transpose()) / Scalar(2);
    return out;
  }

 private:
  Matrix4<Scalar> entries_;
};

template <typename Scalar = double>
struct SymplecticInvariants {
  Scalar det_alpha{1};
  Scalar det_beta{1};
  Scalar det_gamma{0};
  Scalar det_sigma{1};
  Scalar delta{2};        // Det α + Det β + 2 Det γ
  Scalar delta_tilde{2};  // Det α + Det β - 2 Det γ

  /// 1 + Det σ - Δ = (ν₋² - 1)(ν₊² - 1); nonnegative for physical states.
  Scalar physicality_slack() const { return Scalar(1) + det_sigma - delta; }
  Scalar tolerance_scale() const { return std::max(Scalar(1), det_sigma); }
};

template <typename Scalar = double>
struct SymplecticSpectrum {
  Scalar nu_minus{1};
  Scalar nu_plus{1};
  Scalar nu_tilde_minus{1};
  Scalar nu_tilde_plus{1};
};

namespace detail {

template <typename Scalar>
SymplecticInvariants<Scalar> assemble_invariants(Scalar det_alpha, Scalar det_beta,
                                                 Scalar det_gamma, Scalar det_sigma) {
  const Scalar local = det_alpha + det_beta;
  return {det_alpha, det_beta, det_gamma, det_sigma,
          local + Scalar(2) * det_gamma, local - Scalar(2) * det_gamma};
}

// (ν₊, ν₋) from the two-mode invariants (delta, det). Tiny negative discriminants
// (degenerate spectrum) are clamped to zero.
template <typename Scalar>
std::pair<Scalar, Scalar> eigenpair(Scalar delta, Scalar det, Scalar disc, Scalar tol,
                                    const char* which) {
  using std::sqrt;
  if (disc < Scalar(0)) {
    if (disc < -tol * std::max(Scalar(1), delta * delta)) {
      std::ostringstream msg;
      msg << "negative discriminant " << disc << " in " << which << " symplectic spectrum";
      throw DomainError(msg.str());
    }
    disc = Scalar(0);
  }
  const Scalar plus_sq = (delta + sqrt(disc)) / Scalar(2);
  if (!(plus_sq > Scalar(0))) throw DomainError(std::string("nonpositive ") + which + " spectrum");
  // ν₋² = Det / ν₊² avoids the cancellation in Δ - √(Δ² - 4 Det).
  const Scalar minus_sq = det / plus_sq;
  if (minus_sq < Scalar(0)) throw DomainError(std::string("negative determinant in ") + which + " spectrum");
  return {sqrt(plus_sq), sqrt(minus_sq)};
}

template <typename Scalar>
std::pair<Scalar, Scalar> eigenpair(Scalar delta, Scalar det, Scalar tol, const char* which) {
  return eigenpair(delta, det, delta * delta - Scalar(4) * det, tol, which);
}

}  // namespace detail

/// Invariants of a standard form, from closed expressions (no 4x4 determinant).
template <typename Scalar>
SymplecticInvariants<Scalar> invariants(const StandardForm<Scalar>& sf) {
  const Scalar ab = sf.a * sf.b;
  return detail::assemble_invariants(sf.a * sf.a, sf.b * sf.b, sf.c_plus * sf.c_minus,
                                     (ab - sf.c_plus * sf.c_plus) * (ab - sf.c_minus * sf.c_minus));
}

/// Invariants from the 2x2 block decomposition; no physicality check.
template <typename Scalar>
SymplecticInvariants<Scalar> invariants(const CovarianceMatrix<Scalar>& cm) {
  return detail::assemble_invariants(cm.alpha().determinant(), cm.beta().determinant(),
                                     cm.gamma().determinant(), cm.matrix().determinant());
}

/// Names the violated physicality condition, or nullopt for a physical state.
template <typename Scalar>
std::optional<std::string> physicality_violation(const SymplecticInvariants<Scalar>& inv,
                                                 Scalar tol = Scalar(defaults::physicality_tol)) {
  const Scalar slack_tol = tol * inv.tolerance_scale();
  std::ostringstream msg;
  if (inv.det_alpha < Scalar(1) - slack_tol || inv.det_beta < Scalar(1) - slack_tol) {
    msg << "single-mode uncertainty violated: Det α = " << inv.det_alpha
        << ", Det β = " << inv.det_beta << " (must be >= 1)";
    return msg.str();
  }
  if (inv.det_sigma < Scalar(1) - slack_tol) {
    msg << "Det σ >= 1 violated (Det σ = " << inv.det_sigma << ")";
    return msg.str();
  }
  if (inv.physicality_slack() < -slack_tol) {
    msg << "Δ(σ) <= 1 + Det σ violated (Δ = " << inv.delta << ", 1 + Det σ = "
        << Scalar(1) + inv.det_sigma << ")";
    return msg.str();
  }
  return std::nullopt;
}

namespace detail {
template <typename Scalar>
std::optional<std::string> positivity_violation(const CovarianceMatrix<Scalar>& cm, Scalar tol) {
  const Eigen::SelfAdjointEigenSolver<Matrix4<Scalar>> eig(cm.matrix(), Eigen::EigenvaluesOnly);
  const Scalar scale = std::max(Scalar(1), cm.matrix().cwiseAbs().maxCoeff());
  if (eig.eigenvalues().minCoeff() < -tol * scale) {
    std::ostringstream msg;
    msg << "σ >= 0 violated (smallest eigenvalue " << eig.eigenvalues().minCoeff() << ")";
    return msg.str();
  }
  return std::nullopt;
}
}  // namespace detail

template <typename Scalar>
std::optional<std::string> physicality_violation(const CovarianceMatrix<Scalar>& cm,
                                                 Scalar tol = Scalar(defaults::physicality_tol)) {
  if (auto why = detail::positivity_violation(cm, tol)) return why;
  return physicality_violation(invariants(cm), tol);
}

/// Uses the closed-form invariants, which stay accurate where the 4x4 determinant does not.
template <typename Scalar>
std::optional<std::string> physicality_violation(const StandardForm<Scalar>& sf,
                                                 Scalar tol = Scalar(defaults::physicality_tol)) {
  if (auto why = detail::positivity_violation(CovarianceMatrix<Scalar>(sf), tol)) return why;
  return physicality_violation(invariants(sf), tol);
}

/// Δ(σ) <= 1 + Det σ, Det σ >= 1 and σ >= 0, each within tol·max(1, Det σ).
template <typename Scalar>
bool validate_physical(const CovarianceMatrix<Scalar>& cm,
                       Scalar tol = Scalar(defaults::physicality_tol)) {
  return !physicality_violation(cm, tol).has_value();
}

template <typename Scalar>
bool validate_physical(const StandardForm<Scalar>& sf,
                       Scalar tol = Scalar(defaults::physicality_tol)) {
  return !physicality_violation(sf, tol).has_value();
}

namespace detail {
template <typename State, typename Scalar>
void require_physical(const State& state, Scalar tol) {
  if (auto why = physicality_violation(state, tol)) throw DomainError("unphysical state: " + *why);
}
}  // namespace detail

template <typename Scalar>
SymplecticInvariants<Scalar> local_invariants(const CovarianceMatrix<Scalar>& cm,
                                              Scalar tol = Scalar(defaults::physicality_tol)) {
  detail::require_physical(cm, tol);
  return invariants(cm);
}

template <typename Scalar>
SymplecticSpectrum<Scalar> symplectic_spectrum(const SymplecticInvariants<Scalar>& inv,
                                               Scalar tol = Scalar(defaults::physicality_tol)) {
  const auto [nu_plus, nu_minus] = detail::eigenpair(inv.delta, inv.det_sigma, tol, "global");
  const auto [nu_t_plus, nu_t_minus] =
      detail::eigenpair(inv.delta_tilde, inv.det_sigma, tol, "partially transposed");
  return {nu_minus, nu_plus, nu_t_minus, nu_t_plus};
}

template <typename Scalar>
SymplecticSpectrum<Scalar> symplectic_spectrum(const CovarianceMatrix<Scalar>& cm,
                                               Scalar tol = Scalar(defaults::physicality_tol)) {
  return symplectic_spectrum(local_invariants(cm, tol), tol);
}

template <typename Scalar>
SymplecticSpectrum<Scalar> symplectic_spectrum(const StandardForm<Scalar>& sf,
                                               Scalar tol = Scalar(defaults::physicality_tol)) {
  detail::require_physical(sf, tol);
  const auto inv = invariants(sf);
  // Factored discriminants stay accurate near a degenerate spectrum.
  const Scalar split = (sf.a * sf.a - sf.b * sf.b) * (sf.a * sf.a - sf.b * sf.b);
  const Scalar disc = split + Scalar(4) * (sf.a * sf.c_plus + sf.b * sf.c_minus) *
                                  (sf.a * sf.c_minus + sf.b * sf.c_plus);
  const Scalar disc_tilde = split + Scalar(4) * (sf.a * sf.c_plus - sf.b * sf.c_minus) *
                                        (sf.b * sf.c_plus - sf.a * sf.c_minus);
  const auto [nu_plus, nu_minus] = detail::eigenpair(inv.delta, inv.det_sigma, disc, tol, "global");
  const auto [nu_t_plus, nu_t_minus] =
      detail::eigenpair(inv.delta_tilde, inv.det_sigma, disc_tilde, tol, "partially transposed");
  return {nu_minus, nu_plus, nu_t_minus, nu_t_plus};
}

/// Unique standard form with c+ >= |c-| (and hence c+ >= 0).
template <typename Scalar>
StandardForm<Scalar> to_standard_form(const SymplecticInvariants<Scalar>& inv,
                                      Scalar tol = Scalar(defaults::physicality_tol)) {
  using std::abs;
  using std::sqrt;
  const Scalar a = sqrt(inv.det_alpha);
  const Scalar b = sqrt(inv.det_beta);
  const Scalar ab = a * b;
  const Scalar k = inv.det_gamma;
  // c+² and c-² are the roots of t² - S t + k² = 0 with S = c+² + c-².
  Scalar sum_sq = (ab * ab + k * k - inv.det_sigma) / ab;
  Scalar disc = sum_sq * sum_sq - Scalar(4) * k * k;
  const Scalar scale = std::max(Scalar(1), sum_sq * sum_sq);
  if (disc < Scalar(0)) {
    if (disc < -tol * scale) throw DomainError("no real standard form for these invariants");
    disc = Scalar(0);
  }
  if (sum_sq < Scalar(0)) {
    if (sum_sq < -tol * std::max(Scalar(1), ab)) throw DomainError("no real standard form for these invariants");
    sum_sq = Scalar(0);
  }
  const Scalar c_plus = sqrt((sum_sq + sqrt(disc)) / Scalar(2));
  const Scalar c_minus = c_plus > Scalar(0) ? k / c_plus : Scalar(0);
  return {a, b, c_plus, c_minus};
}

template <typename Scalar>
StandardForm<Scalar> to_standard_form(const CovarianceMatrix<Scalar>& cm,
                                      Scalar tol = Scalar(defaults::physicality_tol)) {
  return to_standard_form(local_invariants(cm, tol), tol);
}

/// Canonical sign convention for a form that is already diagonal-block shaped.
template <typename Scalar>
StandardForm<Scalar> canonical(const StandardForm<Scalar>& sf) {
  using std::abs;
  StandardForm<Scalar> out = sf;
  if (abs(out.c_minus) > abs(out.c_plus)) std::swap(out.c_plus, out.c_minus);
  if (out.c_plus < Scalar(0)) {
    out.c_plus = -out.c_plus;
    out.c_minus = -out.c_minus;
  }
  return out;
}

template <typename Scalar>
Scalar global_purity(const SymplecticInvariants<Scalar>& inv) {
  using std::sqrt;
  return Scalar(1) / sqrt(inv.det_sigma);
}

template <typename Scalar>
std::pair<Scalar, Scalar> local_purities(const SymplecticInvariants<Scalar>& inv) {
  using std::sqrt;
  return {Scalar(1) / sqrt(inv.det_alpha), Scalar(1) / sqrt(inv.det_beta)};
}

template <typename Scalar>
Scalar global_purity(const CovarianceMatrix<Scalar>& cm,
                     Scalar tol = Scalar(defaults::physicality_tol)) {
  return global_purity(local_invariants(cm, tol));
}

template <typename Scalar>
std::pair<Scalar, Scalar> local_purities(const CovarianceMatrix<Scalar>& cm,
                                         Scalar tol = Scalar(defaults::physicality_tol)) {
  return local_purities(local_invariants(cm, tol));
}

/// Two-mode squeezed vacuum with squeezing r: blocks cosh 2r · 1 and sinh 2r · Z.
template <typename Scalar = double>
CovarianceMatrix<Scalar> make_two_mode_squeezed(Scalar r) {
  using std::cosh;
  using std::sinh;
  if (!std::isfinite(static_cast<double>(r))) throw DomainError("squeezing parameter must be finite");
  const Scalar ch = cosh(Scalar(2) * r);
  const Scalar sh = sinh(Scalar(2) * r);
  return CovarianceMatrix<Scalar>(StandardForm<Scalar>{ch, ch, sh, -sh});
}

}  // namespace cvent
