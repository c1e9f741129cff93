#include <doctest.h>

#include <sstream>

#include "cvent/bounds.hpp"
#include "oracles.hpp"
#include "random_states.hpp"

using namespace cvent;
using doctest::Approx;

namespace {
// Frozen 30-digit values.
constexpr double lower_at_08306 = 0.533506501357044019;
constexpr double h_half = 0.566165626622601408;
constexpr double h_two_minus_root3 = 1.37744375108173427;
}  // namespace

TEST_CASE("bound curves at reference points") {
  CHECK(nu_opt_upper(0.3) == 0.3);
  CHECK(std::abs(nu_opt_lower(0.8306) - lower_at_08306) < 1e-15);
  CHECK(std::abs(nu_opt_lower(0.5) - (2 - std::sqrt(3.0))) < 1e-15);
  CHECK(nu_opt_lower(1.0) == 1.0);
  CHECK(nu_opt_upper(1.0) == 1.0);
  CHECK(nu_opt_lower(1e-8) == Approx(0.5e-8).epsilon(1e-12));
  CHECK_THROWS_AS(nu_opt_lower(0.0), DomainError);
  CHECK_THROWS_AS(nu_opt_upper(1.5), DomainError);
}

TEST_CASE("bound curves are ordered and increasing") {
  double prev = 0;
  for (int i = 1; i <= 1000; ++i) {
    const double nu = i / 1000.0;
    const double lo = nu_opt_lower(nu);
    CHECK(lo <= nu_opt_upper(nu));
    CHECK(lo > prev);
    CHECK(lo == Approx((1 - std::sqrt(1 - nu * nu)) / nu).epsilon(1e-9));
    prev = lo;
  }
}

TEST_CASE("entanglement-of-formation range at fixed log negativity") {
  const auto [lo, hi] = geof_bounds(1.0);
  CHECK(std::abs(lo - h_half) < 1e-12);
  CHECK(std::abs(hi - h_two_minus_root3) < 1e-12);
  double prev_lo = 0, prev_hi = 0;
  for (int i = 1; i < 200; ++i) {
    const auto [l, h] = geof_bounds(i / 40.0);
    CHECK(l <= h);
    CHECK(l > prev_lo);
    CHECK(h > prev_hi);
    prev_lo = l;
    prev_hi = h;
  }
  const auto [l0, h0] = geof_bounds(1e-9);
  CHECK(l0 < 1e-6);
  CHECK(h0 < 1e-6);
  CHECK_THROWS_AS(geof_bounds(0.0), DomainError);
  CHECK_THROWS_AS(geof_bounds(-1.0), DomainError);
}

TEST_CASE("sampled states are physical, entangled and reproducible") {
  for (auto mode : {SamplerMode::extremal_params, SamplerMode::raw_standard_form}) {
    SamplerConfig cfg{7, 500, 20.0, mode};
    const auto a = sample_random_cm(cfg, 1);
    const auto b = sample_random_cm(cfg, 3);
    REQUIRE(a.size() == 500);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].sf == b[i].sf);
      CHECK(a[i].index == i);
      CHECK(validate_physical(a[i].sf));
      CHECK(symplectic_spectrum(a[i].sf).nu_tilde_minus < 1);
      CHECK(oracle::nu_tilde_minus(a[i].sf) < 1);
    }
    // Each index is independent of the run length.
    CHECK(sample_state(SamplerConfig{7, 1, 20.0, mode}, 123).sf == a[123].sf);
    SamplerConfig other = cfg;
    other.seed = 8;
    CHECK_FALSE(sample_state(other, 0).sf == a[0].sf);
  }
  CHECK_THROWS_AS(validate_config(SamplerConfig{0, 0, 20.0, SamplerMode::extremal_params}), MalformedInput);
  CHECK_THROWS_AS(validate_config(SamplerConfig{0, 5, 1.0, SamplerMode::extremal_params}), MalformedInput);
}

TEST_CASE("entangled window top is where ν̃₋ reaches 1") {
  testgen::Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    const double s = rng.uniform(1.5, 10);
    const double d = (s - 1.2) * rng.uniform(-1, 1);
    const double lambda = rng.uniform(-1, 1);
    const double top = entangled_window_top(s, d, lambda);
    CHECK(top > 2 * std::abs(d) + 1);
    CHECK(top <= gmems_threshold(s));
    const double nu = symplectic_spectrum(build_state(ExtremalParams<double>{s, d, top, lambda})).nu_tilde_minus;
    CHECK(nu == Approx(1.0).epsilon(1e-9));
  }
  CHECK(entangled_window_top(3.0, 0.5, -1.0) == Approx(glems_threshold(3.0, 0.5)).epsilon(1e-9));
  CHECK(entangled_window_top(3.0, 0.5, 1.0) == 5.0);
}

TEST_CASE("bound experiment on a small ensemble") {
  SamplerConfig cfg{2024, 2000, 20.0, SamplerMode::extremal_params};
  const auto r = bound_experiment(cfg);
  CHECK(r.summary.samples == 2000);
  CHECK(r.summary.failures == 0);
  CHECK(r.summary.violations_upper == 0);
  CHECK(r.summary.violations_lower == 0);
  CHECK(r.summary.min_m_max_gap >= -1e-9);
  for (const auto& pt : r.points) {
    if (std::abs(pt.params.d) < 1e-3) continue;
    CHECK(pt.nu_tilde_opt <= pt.nu_tilde_sigma + 1e-9);
  }

  SamplerConfig raw{99, 1000, 10.0, SamplerMode::raw_standard_form};
  const auto rr = bound_experiment(raw);
  CHECK(rr.summary.failures == 0);
  CHECK(rr.summary.violations_upper == 0);
  CHECK(rr.summary.violations_lower == 0);
}

TEST_CASE("symmetric samples saturate the upper curve") {
  testgen::Rng rng(52);
  for (int i = 0; i < 200; ++i) {
    const double s = rng.uniform(1.1, 20);
    const double lambda = rng.uniform(-1, 1);
    const double g = rng.uniform(1, entangled_window_top(s, 0.0, lambda));
    const Sample sample{std::size_t(i), {s, 0, g, lambda}, build_state(ExtremalParams<double>{s, 0, g, lambda})};
    const auto pt = measure_bound_point(sample);
    if (pt.nu_tilde_sigma > 1 - 1e-8) continue;
    CHECK(std::abs(pt.nu_tilde_opt - pt.nu_tilde_sigma) < 1e-9);
  }
}

TEST_CASE("coalesced states approach the lower curve as s grows") {
  const double nu = 0.4;
  double prev_gap = INFINITY;
  for (double s : {2.0, 5.0, 20.0, 100.0, 1000.0}) {
    const double d = (2 * nu * s - nu * nu - 1) / 2;
    const auto sf = build_state(ExtremalParams<double>{s, d, 2 * d + 1, 1});
    REQUIRE(symplectic_spectrum(sf).nu_tilde_minus == Approx(nu).epsilon(1e-9));
    const double gap = minimize_m(sf).nu_tilde_opt - nu_opt_lower(nu);
    CHECK(gap >= -1e-9);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 1e-3);
}

TEST_CASE("coalesced states are local maxima of m at fixed negativity") {
  testgen::Rng rng(53);
  for (int i = 0; i < 30; ++i) {
    const double s = rng.uniform(2, 10);
    const double d = rng.uniform(0.1, s - 1.5);
    const auto sf = build_state(ExtremalParams<double>{s, d, 2 * d + 1, 1});
    const double nu = symplectic_spectrum(sf).nu_tilde_minus;
    const double m_ref = m_opt_gmemms(s, nu);
    for (int k = 0; k < 20; ++k) {
      StandardForm<double> q{sf.a * (1 + 1e-4 * rng.uniform(-1, 1)), sf.b * (1 + 1e-4 * rng.uniform(-1, 1)),
                             sf.c_plus * (1 + 1e-4 * rng.uniform(-1, 1)),
                             sf.c_minus * (1 + 1e-4 * rng.uniform(-1, 1))};
      if (!validate_physical(q)) continue;
      const double nu_q = symplectic_spectrum(q).nu_tilde_minus;
      if (nu_q >= 1) continue;
      // Compare against the coalesced value at the perturbed negativity.
      const double s_q = (q.a + q.b) / 2;
      const double m_cmp = s_q >= (1 + nu_q * nu_q) / (2 * nu_q) ? m_opt_gmemms(s_q, nu_q) : m_ref;
      CHECK(minimize_m(q).m_opt <= m_cmp + 1e-6);
    }
  }
}

TEST_CASE("experiment CSV layout and determinism") {
  SamplerConfig cfg{5, 50, 20.0, SamplerMode::extremal_params};
  ExperimentOptions one, many;
  one.threads = 1;
  many.threads = 4;
  std::ostringstream a, b;
  write_experiment_csv(a, bound_experiment(cfg, one));
  write_experiment_csv(b, bound_experiment(cfg, many));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("index,s,d,g,lambda,nu_tilde_sigma,nu_tilde_opt,log_neg,geof,violates_42,violates_46\n", 0) == 0);
  std::ostringstream curves;
  write_bound_curves_csv(curves, 4);
  CHECK(curves.str().rfind("nu_tilde,lower,upper\n0.25,", 0) == 0);
}
