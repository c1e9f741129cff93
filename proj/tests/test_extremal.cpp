#include <doctest.h>

#include <map>
#include <sstream>

#include "cvent/extremal.hpp"
#include "cvent/scan.hpp"
#include "oracles.hpp"
#include "random_states.hpp"

using namespace cvent;
using doctest::Approx;

namespace {
double rel(double x, double y) { return std::abs(x - y) / std::max(1.0, std::abs(y)); }
}  // namespace

TEST_CASE("parameter constraints are enforced with the inequality named") {
  auto why = param_violation(ExtremalParams<double>{0.5, 0, 1, 1});
  REQUIRE(why);
  CHECK(why->find("s >= 1") != std::string::npos);
  why = param_violation(ExtremalParams<double>{2, 1.5, 5, 1});
  REQUIRE(why);
  CHECK(why->find("|d| <= s - 1") != std::string::npos);
  why = param_violation(ExtremalParams<double>{3, 1, 2, 1});
  REQUIRE(why);
  CHECK(why->find("g >= 2|d| + 1") != std::string::npos);
  why = param_violation(ExtremalParams<double>{3, 1, 4, 1.5});
  REQUIRE(why);
  CHECK(why->find("λ") != std::string::npos);
  CHECK_THROWS_AS(build_state(ExtremalParams<double>{3, 1, 2, 1}), DomainError);
  CHECK_THROWS_AS(m_opt_gmems(ExtremalParams<double>{3, 1, 2, 1}), DomainError);
}

TEST_CASE("coalescence at g = 2|d| + 1") {
  for (double lambda : {-1.0, -0.3, 0.4, 1.0}) {
    const auto sf = build_state(ExtremalParams<double>{3, 0.5, 2, lambda});
    CHECK(sf.a == Approx(3.5));
    CHECK(sf.b == Approx(2.5));
    CHECK(sf.c_plus == Approx(std::sqrt(9 - 1.5 * 1.5)).epsilon(1e-10));
    CHECK(sf.c_minus == Approx(-std::sqrt(9 - 1.5 * 1.5)).epsilon(1e-10));
  }
  CHECK(classify_entanglement(ExtremalParams<double>{3, 0.5, 2, 0.2}) == Entanglement::entangled);
}

TEST_CASE("pure symmetric member") {
  const auto sf = build_state(ExtremalParams<double>{2, 0, 1, 0.3});
  CHECK(sf.a == 2.0);
  CHECK(sf.b == 2.0);
  CHECK(sf.c_plus == Approx(std::sqrt(3.0)).epsilon(1e-12));
  CHECK(sf.c_minus == Approx(-std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("minimal-negativity states have ν₋ = 1") {
  const auto sf = build_state(ExtremalParams<double>{2, 0.5, 2.5, -1});
  CHECK(std::abs(symplectic_spectrum(sf).nu_minus - 1) < 1e-9);
  CHECK(std::abs(oracle::nu_minus(sf) - 1) < 1e-7);
  CHECK(symplectic_spectrum(sf).nu_tilde_minus == Approx(0.8305617).epsilon(1e-6));
  CHECK(symplectic_spectrum(build_state(ExtremalParams<double>{2, 0.5, 2.5, 1})).nu_tilde_minus ==
        Approx(0.77525513).epsilon(1e-7));
}

TEST_CASE("built states have the requested purities") {
  testgen::Rng rng(41);
  for (int i = 0; i < 2000; ++i) {
    const auto p = testgen::random_entangled_params(rng, 20.0);
    const auto sf = build_state(p);
    CHECK(validate_physical(sf));
    const auto inv = invariants(sf);
    const auto [mu1, mu2] = local_purities(inv);
    CHECK(global_purity(inv) == Approx(1 / p.g).epsilon(1e-9));
    CHECK(mu1 == Approx(1 / (p.s + p.d)).epsilon(1e-12));
    CHECK(mu2 == Approx(1 / (p.s - p.d)).epsilon(1e-12));
    const auto back = mixedness_params(sf);
    CHECK(back.s == Approx(p.s).epsilon(1e-12));
    CHECK(back.d == Approx(p.d).epsilon(1e-12));
    CHECK(back.g == Approx(p.g).epsilon(1e-9));
  }
}

TEST_CASE("λ orders the negativity at fixed purities") {
  testgen::Rng rng(42);
  for (int i = 0; i < 300; ++i) {
    const auto p = testgen::random_entangled_params(rng, 10.0);
    auto nu_at = [&](double l) {
      return symplectic_spectrum(build_state(ExtremalParams<double>{p.s, p.d, p.g, l})).nu_tilde_minus;
    };
    const double lo = nu_at(1), hi = nu_at(-1), mid = nu_at(p.lambda);
    CHECK(lo <= mid + 1e-10);
    CHECK(mid <= hi + 1e-10);
    CHECK(std::abs(oracle::nu_minus(build_state(ExtremalParams<double>{p.s, p.d, p.g, -1})) - 1) < 1e-6);
  }
}

TEST_CASE("entanglement thresholds") {
  CHECK(classify_entanglement(ExtremalParams<double>{2, 0.5, 2.99, 1}) == Entanglement::entangled);
  CHECK(classify_entanglement(ExtremalParams<double>{2, 0.5, 3.0, 1}) == Entanglement::separable);
  CHECK(classify_entanglement(ExtremalParams<double>{2, 0.5, 2.7, -1}) == Entanglement::entangled);
  CHECK(classify_entanglement(ExtremalParams<double>{2, 0.5, 2.75, -1}) == Entanglement::separable);
  CHECK(glems_threshold(2.0, 0.5) == Approx(std::sqrt(7.5)));

  testgen::Rng rng(43);
  for (int i = 0; i < 500; ++i) {
    const auto p = testgen::random_entangled_params(rng, 10.0);
    const double g = rng.uniform(2 * std::abs(p.d) + 1, gmems_threshold(p.s));
    const ExtremalParams<double> q{p.s, p.d, g, p.lambda};
    const auto sp = symplectic_spectrum(build_state(q));
    if (std::abs(sp.nu_tilde_minus - 1) < 1e-9) continue;
    CHECK((classify_entanglement(q) == Entanglement::separable) == is_separable_ppt(sp));
  }
}

TEST_CASE("closed forms at the reference point") {
  CHECK(m_opt_gmems(ExtremalParams<double>{2, 0.5, 2.5, 1}) ==
        Approx(5.75 * 5.75 / 30.25).epsilon(1e-15));
  CHECK(m_opt_gmems(ExtremalParams<double>{2, 0.5, 3.0, 1}) == 1.0);
  CHECK(m_opt_glems(ExtremalParams<double>{2, 0.5, 2.5, -1}) == Approx(1.05519725188705981).epsilon(1e-14));
  CHECK(m_opt_glems(ExtremalParams<double>{2, 0.5, std::sqrt(7.5), -1}) == 1.0);
  // δ-branch continuity at the threshold: (86.25 - 26.25) / 60 = 1.
  const double g = std::sqrt(7.5) * (1 - 1e-12);
  CHECK(m_opt_glems(ExtremalParams<double>{2, 0.5, g, -1}) == Approx(1.0).epsilon(1e-9));
  // Pure symmetric: m = s².
  CHECK(m_opt_gmems(ExtremalParams<double>{3, 0, 1, 1}) == Approx(9.0).epsilon(1e-12));
}

TEST_CASE("d < 0 is the same state with relabelled modes") {
  const ExtremalParams<double> p{3, 0.7, 3.1, 1}, q{3, -0.7, 3.1, 1};
  CHECK(m_opt_gmems(p) == m_opt_gmems(q));
  CHECK(m_opt_glems(ExtremalParams<double>{3, 0.7, 3.1, -1}) ==
        m_opt_glems(ExtremalParams<double>{3, -0.7, 3.1, -1}));
  CHECK(minimize_m(build_state(q)).m_opt == Approx(m_opt_gmems(p)).epsilon(1e-9));
  CHECK(ordering_compare(3.0, -0.7, 3.1).modes_swapped);
}

TEST_CASE("closed forms agree with minimize_m on random parameters") {
  testgen::Rng rng(44);
  for (int i = 0; i < 3000; ++i) {
    const auto p = testgen::random_entangled_params(rng, 20.0);
    const double g = rng.uniform(2 * std::abs(p.d) + 1, gmems_threshold(p.s));
    const ExtremalParams<double> plus{p.s, p.d, g, 1}, minus{p.s, p.d, g, -1};
    CHECK(rel(m_opt_gmems(plus), minimize_m(build_state(plus)).m_opt) < 1e-8);
    CHECK(rel(m_opt_glems(minus), minimize_m(build_state(minus)).m_opt) < 1e-8);
  }
}

TEST_CASE("closed forms respect the negativity bounds") {
  testgen::Rng rng(45);
  for (int i = 0; i < 2000; ++i) {
    const auto p = testgen::random_entangled_params(rng, 20.0);
    for (double l : {1.0, -1.0}) {
      const ExtremalParams<double> q{p.s, p.d, p.g, l};
      const double nu = symplectic_spectrum(build_state(q)).nu_tilde_minus;
      if (nu >= 1 - 1e-8) continue;
      const double m = l > 0 ? m_opt_gmems(q) : m_opt_glems(q);
      CHECK(m >= m_from_nu_tilde(nu) * (1 - 1e-9));
      CHECK(m <= m_max(nu) * (1 + 1e-9));
    }
  }
}

TEST_CASE("coalesced family closed form") {
  CHECK(m_max(0.5) == 4.0);
  CHECK(m_opt_gmemms(1.25, 0.5) == Approx(1.5625).epsilon(1e-15));
  CHECK(m_opt_gmemms(1.25, 0.5) == Approx(m_from_nu_tilde(0.5)).epsilon(1e-15));
  CHECK(m_opt_gmemms(1e9, 0.5) == Approx(4.0).epsilon(1e-8));
  double prev = 0;
  for (double s = 1.25; s < 50; s += 0.5) {
    const double m = m_opt_gmemms(s, 0.5);
    CHECK(m > prev);
    prev = m;
  }
  CHECK_THROWS_AS(m_opt_gmemms(1.0, 0.5), DomainError);
  CHECK_THROWS_AS(m_opt_gmemms(2.0, 1.5), DomainError);
  CHECK_THROWS_AS(m_max(0.0), DomainError);

  testgen::Rng rng(46);
  for (int i = 0; i < 200; ++i) {
    const double s = rng.uniform(1.5, 15);
    const double d = rng.uniform(0, s - 1.2);
    const auto sf = build_state(ExtremalParams<double>{s, d, 2 * d + 1, 0.0});
    const double nu = symplectic_spectrum(sf).nu_tilde_minus;
    CHECK(rel(m_opt_gmemms(s, nu), minimize_m(sf).m_opt) < 1e-8);
  }
}

TEST_CASE("ordering verdicts") {
  auto v = ordering_compare(2.0, 0.5, 2.5);
  CHECK(v.regime == Regime::ordering_preserved);
  CHECK(v.m_gmems == Approx(1.09297520661157025));
  CHECK(v.m_glems == Approx(1.05519725188705981));
  CHECK(ordering_compare(2.0, 0.5, 2.74).regime == Regime::coexistence);
  CHECK(ordering_compare(2.0, 0.5, 3.2).regime == Regime::both_separable);
  CHECK(ordering_compare(2.0, 0.5, 1.5).regime == Regime::unphysical);
  CHECK(ordering_compare(2.0, 0.5, 3.8).regime == Regime::unphysical);
  CHECK(ordering_compare(1.5, 1.0, 3.0).regime == Regime::unphysical);
}

TEST_CASE("fixed-a slice has all five regions and an inverted region") {
  ScanOptions opts;
  opts.threads = 1;
  const auto r = scan_fixed_a(5.0, {1, 10}, {1, 15}, 120, 120, opts);
  std::map<Regime, int> counts;
  for (const auto& c : r.cells) ++counts[c.verdict.regime];
  CHECK(counts.size() == 5);
  CHECK(counts[Regime::ordering_inverted] > 0);
  REQUIRE_FALSE(r.boundary.empty());
  CHECK(r.rejected_brackets == 0);
  for (const auto& p : r.boundary) {
    CHECK(std::abs(p.gap) < 1e-5);
    const auto below = ordering_compare(p.s, p.d, p.g_boundary - 1e-3);
    const auto above = ordering_compare(p.s, p.d, p.g_boundary + 1e-3);
    if (p.g_boundary < 2 * std::abs(p.d) + 1 + 1e-9) {
      // Inverted cells touching the coalescence line, where the two families coincide.
      CHECK(p.gap == 0.0);
      CHECK(below.regime == Regime::unphysical);
      CHECK(above.regime == Regime::ordering_inverted);
    } else {
      CHECK(below.regime == Regime::ordering_inverted);
      CHECK(above.regime == Regime::ordering_preserved);
    }
  }
}

TEST_CASE("an all-separable window gives one region") {
  const auto r = scan_fixed_a(3.0, {3, 4}, {7, 9}, 10, 10);
  for (const auto& c : r.cells) CHECK(c.verdict.regime == Regime::both_separable);
  CHECK(r.boundary.empty());
}

TEST_CASE("scan output is deterministic across thread counts") {
  ScanOptions one, many;
  one.threads = 1;
  many.threads = 4;
  std::ostringstream a, b;
  write_scan_csv(a, scan_sdg({1, 4}, {-1, 1}, {1, 6}, 6, 5, 7, one));
  write_scan_csv(b, scan_sdg({1, 4}, {-1, 1}, {1, 6}, 6, 5, 7, many));
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("s,d,g,m_gmems,m_glems,nu_tilde_gmems,nu_tilde_glems,regime\n", 0) == 0);
}
