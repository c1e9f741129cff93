#pragma once
// Bounds on Gaussian entanglement measures in terms of the negativity, random
// entangled states, and the ensemble experiment that tests the bounds.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "cvent/extremal.hpp"
#include "cvent/gaussian_em.hpp"
#include "cvent/negativity.hpp"

namespace cvent {

namespace detail {
template <typename Scalar>
void require_unit_interval(Scalar nu) {
  if (!(nu > Scalar(0) && nu <= Scalar(1))) {
    std::ostringstream msg;
    msg << "0 < ν̃ <= 1 violated (ν̃ = " << nu << ")";
    throw DomainError(msg.str());
  }
}
}  // namespace detail

/// ν̃_opt <= ν̃₋(σ).
template <typename Scalar>
Scalar nu_opt_upper(Scalar nu_tilde_sigma) {
  detail::require_unit_interval(nu_tilde_sigma);
  return nu_tilde_sigma;
}

/// ν̃_opt >= (1 - √(1 - ν̃²)) / ν̃, evaluated as ν̃ / (1 + √(1 - ν̃²)).
template <typename Scalar>
Scalar nu_opt_lower(Scalar nu_tilde_sigma) {
  using std::sqrt;
  detail::require_unit_interval(nu_tilde_sigma);
  const Scalar nu = nu_tilde_sigma;
  return nu / (Scalar(1) + sqrt((Scalar(1) - nu) * (Scalar(1) + nu)));
}

/// Gaussian EoF range at fixed logarithmic negativity E_N (base 2):
/// lower = h(2^-E), upper = h(nu_opt_lower(2^-E)).
template <typename Scalar>
std::pair<Scalar, Scalar> geof_bounds(Scalar log_negativity, LogBase base = LogBase::two) {
  using std::exp2;
  if (!(log_negativity > Scalar(0)) || !std::isfinite(static_cast<double>(log_negativity))) {
    std::ostringstream msg;
    msg << "E_N > 0 violated (E_N = " << log_negativity << ")";
    throw DomainError(msg.str());
  }
  const Scalar nu = exp2(-log_negativity);
  return {h_function(nu, base), h_function(nu_opt_lower(nu), base)};
}

enum class SamplerMode { extremal_params, raw_standard_form };

struct SamplerConfig {
  std::uint64_t seed{0};
  std::size_t count{1};
  double s_max{20.0};
  SamplerMode mode{SamplerMode::extremal_params};
};

void validate_config(const SamplerConfig& cfg);

struct Sample {
  std::size_t index{0};
  /// λ is NaN for raw samples.
  ExtremalParams<double> params;
  StandardForm<double> sf;
};

/// Largest g of the entangled window at fixed (s, d, λ): the root of ν̃₋ = 1 on
/// [2|d| + 1, 2s - 1].
double entangled_window_top(double s, double d, double lambda);

/// The index-th state of the stream; independent of every other index.
Sample sample_state(const SamplerConfig& cfg, std::size_t index);

/// Physical states with ν̃₋ < 1 - near_separable (the sampler never emits states
/// that minimize_m would short-circuit to separable).
std::vector<Sample> sample_random_cm(const SamplerConfig& cfg, unsigned threads = 0);

struct BoundPoint {
  std::size_t index{0};
  ExtremalParams<double> params;
  StandardForm<double> sf;
  double nu_tilde_sigma{1};
  double nu_tilde_opt{1};
  double log_negativity{0};
  double gaussian_eof{0};
  double m_opt{1};
  bool violates_upper{false};  // ν̃_opt > ν̃₋(σ) + slack
  bool violates_lower{false};  // ν̃_opt < nu_opt_lower(ν̃₋(σ)) - slack
  bool failed{false};
  std::string error;
};

struct ExperimentOptions {
  double bound_slack = 1e-9;
  unsigned threads = 0;
  EmOptions em;
};

struct ExperimentSummary {
  std::size_t samples{0};
  std::size_t failures{0};
  std::size_t violations_upper{0};
  std::size_t violations_lower{0};
  /// min over samples of 1/ν̃₋² - m_opt.
  double min_m_max_gap{0};
  /// max over samples of ν̃_opt - ν̃₋(σ) (<= 0 when the upper bound holds).
  double max_upper_excess{0};
  /// max over samples of nu_opt_lower(ν̃₋(σ)) - ν̃_opt.
  double max_lower_excess{0};
};

struct ExperimentResult {
  std::vector<BoundPoint> points;
  ExperimentSummary summary;
};

BoundPoint measure_bound_point(const Sample& sample, const ExperimentOptions& opts = {});

ExperimentResult bound_experiment(const SamplerConfig& cfg, const ExperimentOptions& opts = {});

void write_experiment_csv(std::ostream& out, const ExperimentResult& result);

/// nu_tilde,lower,upper at `resolution` points of (0, 1].
void write_bound_curves_csv(std::ostream& out, int resolution);

/// log_neg,geof_lower,geof_upper at `resolution` points of (0, max_log_neg].
void write_geof_curves_csv(std::ostream& out, int resolution, double max_log_neg);

}  // namespace cvent
