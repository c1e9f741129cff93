#include <doctest.h>

#include "cvent/negativity.hpp"
#include "oracles.hpp"
#include "random_states.hpp"

using namespace cvent;
using doctest::Approx;

// Frozen from a 30-digit evaluation of u log₂ u - v log₂ v.
constexpr double h_half = 0.566165626622601408;
constexpr double h_third = 1.08170416594551049;
constexpr double h_two_minus_root3 = 1.37744375108173427;
constexpr double log2_3 = 1.58496250072115618;

TEST_CASE("h at frozen reference points") {
  CHECK(std::abs(h_function(0.5) - h_half) < 1e-14);
  CHECK(std::abs(h_function(1.0 / 3) - h_third) < 1e-14);
  CHECK(std::abs(h_function(2 - std::sqrt(3.0)) - h_two_minus_root3) < 1e-14);
  CHECK(std::abs(h_function(2 - std::sqrt(3.0)) - (1.5 * std::log2(1.5) + 0.5)) < 1e-14);
  CHECK(h_function(1.0) == 0.0);
}

TEST_CASE("h agrees with its definition and is decreasing") {
  double prev = INFINITY;
  for (int i = 1; i < 1000; ++i) {
    const double x = i / 1000.0;
    const double h = h_function(x);
    CHECK(h == Approx(oracle::h_naive(x)).epsilon(1e-12));
    CHECK(h < prev);
    prev = h;
  }
  CHECK(h_function(0.5, LogBase::e) == Approx(h_half * std::log(2.0)).epsilon(1e-14));
  CHECK(h_function(1e-12) > 0);
  CHECK_THROWS_AS(h_function(0.0), DomainError);
}

TEST_CASE("negativities of the two-mode squeezed state with ν̃₋ = 1/3") {
  const StandardForm<double> sf{5.0 / 3, 5.0 / 3, 4.0 / 3, -4.0 / 3};
  const auto report = negativity_report(sf);
  CHECK_FALSE(report.separable);
  CHECK(std::abs(report.log_negativity - log2_3) < 1e-12);
  CHECK(report.negativity == Approx(1.0).epsilon(1e-12));
  REQUIRE(report.eof_symmetric);
  CHECK(std::abs(*report.eof_symmetric - h_third) < 1e-12);
  const auto nat = negativity_report(sf, LogBase::e);
  CHECK(nat.log_negativity == Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("separable and nonsymmetric states") {
  const auto vac = negativity_report(StandardForm<double>{});
  CHECK(vac.separable);
  CHECK(vac.negativity == 0.0);
  CHECK(vac.log_negativity == 0.0);
  CHECK(*vac.eof_symmetric == 0.0);

  const StandardForm<double> nonsym{2.5, 1.5, 1.2, -0.9};
  CHECK_FALSE(negativity_report(nonsym).eof_symmetric.has_value());
  CHECK_THROWS_AS(eof_symmetric(nonsym), NotApplicable);

  CHECK(negativity(1.5) == 0.0);
  CHECK(log_negativity(1.5) == 0.0);
  CHECK_THROWS_AS(negativity(0.0), DomainError);
  CHECK_THROWS_AS(log_negativity(-1.0), DomainError);
}

TEST_CASE("PPT test agrees with the eigenvalue oracle on random states") {
  testgen::Rng rng(21);
  int entangled = 0;
  for (int i = 0; i < 500; ++i) {
    const auto cm = testgen::random_cm(rng);
    const auto sp = symplectic_spectrum(cm, 1e-8);
    const double nu = oracle::symplectic_eigenvalues(oracle::partial_transpose(cm.matrix()))[0];
    if (std::abs(nu - 1) < 1e-8) continue;
    CHECK(is_separable_ppt(sp) == (nu >= 1));
    entangled += nu < 1;
    if (nu < 1) CHECK(log_negativity(sp.nu_tilde_minus) == Approx(-std::log2(nu)).epsilon(1e-9));
  }
  CHECK(entangled > 50);
}

TEST_CASE("log negativity is recomputable from ν̃₋") {
  for (double nu : {0.1, 0.5, 0.9, 0.999}) {
    CHECK(std::exp2(-log_negativity(nu)) == Approx(nu).epsilon(1e-14));
    CHECK(negativity(nu) == Approx((1 - nu) / (2 * nu)).epsilon(1e-14));
  }
}
