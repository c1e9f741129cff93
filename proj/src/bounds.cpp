#include "cvent/bounds.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "cvent/csv.hpp"
#include "cvent/parallel.hpp"

namespace cvent {

namespace {

constexpr std::size_t max_rejections = 1'000'000;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Counter-based stream: the generator of sample i depends only on (seed, i).
class IndexStream {
 public:
  IndexStream(std::uint64_t seed, std::size_t index)
      : engine_(splitmix64(splitmix64(seed) ^ splitmix64(std::uint64_t(index) + 1))) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

double nu_tilde_of(const ExtremalParams<double>& p) {
  try {
    return symplectic_spectrum(build_state(p)).nu_tilde_minus;
  } catch (const DomainError&) {
    return std::numeric_limits<double>::infinity();  // outside the parametrized window
  }
}

bool entangled_enough(const StandardForm<double>& sf, double& nu_tilde) {
  if (!validate_physical(sf)) return false;
  nu_tilde = symplectic_spectrum(sf).nu_tilde_minus;
  return nu_tilde < 1.0 - EmOptions{}.near_separable;
}

Sample draw_extremal(const SamplerConfig& cfg, std::size_t index, IndexStream& rng) {
  for (std::size_t attempt = 0; attempt < max_rejections; ++attempt) {
    const double s = rng.uniform(1.0, cfg.s_max);
    const double d = (s - 1.0) * rng.uniform(-1.0, 1.0);
    const double lambda = rng.uniform(-1.0, 1.0);
    const double lo = 2.0 * std::abs(d) + 1.0;
    const double hi = entangled_window_top(s, d, lambda);
    if (!(hi > lo)) continue;
    const ExtremalParams<double> p{s, d, rng.uniform(lo, hi), lambda};
    StandardForm<double> sf;
    try {
      sf = build_state(p);
    } catch (const DomainError&) {
      continue;
    }
    double nu = 1.0;
    if (entangled_enough(sf, nu)) return {index, p, sf};
  }
  throw NumericalFailure("sampler: too many consecutive rejections in extremal mode");
}

Sample draw_raw(const SamplerConfig& cfg, std::size_t index, IndexStream& rng) {
  for (std::size_t attempt = 0; attempt < max_rejections; ++attempt) {
    const double a = rng.uniform(1.0, cfg.s_max);
    const double b = rng.uniform(1.0, cfg.s_max);
    const double c_max = std::sqrt(a * b);
    const StandardForm<double> sf =
        canonical(StandardForm<double>{a, b, rng.uniform(0.0, c_max), rng.uniform(-c_max, 0.0)});
    double nu = 1.0;
    if (entangled_enough(sf, nu)) {
      auto p = mixedness_params(sf);
      p.lambda = std::numeric_limits<double>::quiet_NaN();
      return {index, p, sf};
    }
  }
  throw NumericalFailure("sampler: too many consecutive rejections in raw mode");
}

}  // namespace

void validate_config(const SamplerConfig& cfg) {
  if (cfg.count < 1) throw MalformedInput("sampler count must be >= 1");
  if (!(cfg.s_max > 1.0) || !std::isfinite(cfg.s_max)) throw MalformedInput("sampler s_max must be > 1");
}

double entangled_window_top(double s, double d, double lambda) {
  const double lo = 2.0 * std::abs(d) + 1.0;
  double hi = gmems_threshold(s);
  if (!(hi > lo)) return lo;
  if (lambda == 1.0) return hi;
  double a = lo;
  if (nu_tilde_of({s, d, a, lambda}) >= 1.0) return lo;
  if (nu_tilde_of({s, d, hi, lambda}) < 1.0) return hi;
  // ν̃₋ increases with g at fixed (s, d, λ).
  for (int it = 0; it < 200 && hi - a > 1e-14 * hi; ++it) {
    const double mid = 0.5 * (a + hi);
    if (nu_tilde_of({s, d, mid, lambda}) < 1.0) {
      a = mid;
    } else {
      hi = mid;
    }
  }
  return a;
}

Sample sample_state(const SamplerConfig& cfg, std::size_t index) {
  validate_config(cfg);
  IndexStream rng(cfg.seed, index);
  return cfg.mode == SamplerMode::extremal_params ? draw_extremal(cfg, index, rng)
                                                  : draw_raw(cfg, index, rng);
}

std::vector<Sample> sample_random_cm(const SamplerConfig& cfg, unsigned threads) {
  validate_config(cfg);
  std::vector<Sample> out(cfg.count);
  parallel_for(cfg.count, threads, [&](std::size_t i) { out[i] = sample_state(cfg, i); });
  return out;
}

BoundPoint measure_bound_point(const Sample& sample, const ExperimentOptions& opts) {
  BoundPoint pt;
  pt.index = sample.index;
  pt.params = sample.params;
  pt.sf = sample.sf;
  try {
    const auto spectrum = symplectic_spectrum(sample.sf);
    pt.nu_tilde_sigma = spectrum.nu_tilde_minus;
    pt.log_negativity = log_negativity(pt.nu_tilde_sigma, opts.em.log_base);
    const auto gem = minimize_m(sample.sf, opts.em);
    pt.m_opt = gem.m_opt;
    pt.nu_tilde_opt = gem.nu_tilde_opt;
    pt.gaussian_eof = gem.gaussian_eof;
    pt.violates_upper = pt.nu_tilde_opt > nu_opt_upper(pt.nu_tilde_sigma) + opts.bound_slack;
    pt.violates_lower = pt.nu_tilde_opt < nu_opt_lower(pt.nu_tilde_sigma) - opts.bound_slack;
  } catch (const std::exception& e) {
    pt.failed = true;
    pt.error = e.what();
  }
  return pt;
}

ExperimentResult bound_experiment(const SamplerConfig& cfg, const ExperimentOptions& opts) {
  validate_config(cfg);
  ExperimentResult result;
  result.points.resize(cfg.count);
  parallel_for(cfg.count, opts.threads, [&](std::size_t i) {
    result.points[i] = measure_bound_point(sample_state(cfg, i), opts);
  });

  auto& sum = result.summary;
  sum.samples = cfg.count;
  sum.min_m_max_gap = std::numeric_limits<double>::infinity();
  sum.max_upper_excess = -std::numeric_limits<double>::infinity();
  sum.max_lower_excess = -std::numeric_limits<double>::infinity();
  for (const auto& pt : result.points) {
    if (pt.failed) {
      ++sum.failures;
      continue;
    }
    sum.violations_upper += pt.violates_upper ? 1 : 0;
    sum.violations_lower += pt.violates_lower ? 1 : 0;
    sum.min_m_max_gap = std::min(sum.min_m_max_gap, m_max(pt.nu_tilde_sigma) - pt.m_opt);
    sum.max_upper_excess = std::max(sum.max_upper_excess, pt.nu_tilde_opt - pt.nu_tilde_sigma);
    sum.max_lower_excess =
        std::max(sum.max_lower_excess, nu_opt_lower(pt.nu_tilde_sigma) - pt.nu_tilde_opt);
  }
  return result;
}

void write_experiment_csv(std::ostream& out, const ExperimentResult& result) {
  out << "index,s,d,g,lambda,nu_tilde_sigma,nu_tilde_opt,log_neg,geof,violates_42,violates_46\n";
  for (const auto& pt : result.points) {
    if (pt.failed) continue;
    out << pt.index << ',' << fmt17(pt.params.s) << ',' << fmt17(pt.params.d) << ','
        << fmt17(pt.params.g) << ',' << fmt17(pt.params.lambda) << ',' << fmt17(pt.nu_tilde_sigma)
        << ',' << fmt17(pt.nu_tilde_opt) << ',' << fmt17(pt.log_negativity) << ','
        << fmt17(pt.gaussian_eof) << ',' << int(pt.violates_upper) << ',' << int(pt.violates_lower)
        << '\n';
  }
}

void write_bound_curves_csv(std::ostream& out, int resolution) {
  out << "nu_tilde,lower,upper\n";
  for (int i = 1; i <= resolution; ++i) {
    const double nu = double(i) / double(resolution);
    out << fmt17(nu) << ',' << fmt17(nu_opt_lower(nu)) << ',' << fmt17(nu_opt_upper(nu)) << '\n';
  }
}

void write_geof_curves_csv(std::ostream& out, int resolution, double max_log_neg) {
  out << "log_neg,geof_lower,geof_upper\n";
  for (int i = 1; i <= resolution; ++i) {
    const double e = max_log_neg * double(i) / double(resolution);
    const auto [lo, hi] = geof_bounds(e);
    out << fmt17(e) << ',' << fmt17(lo) << ',' << fmt17(hi) << '\n';
  }
}

}  // namespace cvent
