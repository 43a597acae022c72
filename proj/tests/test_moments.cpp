#include "areadist/moments.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <vector>

using areadist::ArcsinDensityParts;
using areadist::BigFloat;
using areadist::Complex;
using areadist::GKind;
using areadist::Jet;
using areadist::JetOrderError;
using areadist::MomentResult;
using areadist::MomentRoute;
using areadist::Normalization;
using areadist::PrecisionConfig;
using areadist::PrecisionScope;
using areadist::ProbePolynomial;
using areadist::arcsin_density_parts;
using areadist::big_ln2;
using areadist::big_pi;
using areadist::contact_term;
using areadist::cutoff_shift_check;
using areadist::density_moment_quadrature;
using areadist::generating_function_closed;
using areadist::generating_function_quadrature;
using areadist::jet_sin;
using areadist::moment_closed_form;
using areadist::moment_generic;
using areadist::mu_functional;
using areadist::to_unit_mass;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("generating function closed form") {
  CHECK(std::abs(generating_function_closed(0.0) - kPi * std::log(2.0)) < 1e-15);
  CHECK(generating_function_closed(1.0) == 0.0);
  CHECK(std::abs(generating_function_closed(0.6) - kPi * std::log(1.8)) < 1e-15);
  CHECK_THROWS_AS(generating_function_closed(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(generating_function_closed(1.1), std::invalid_argument);
}

TEST_CASE("generating function radial quadrature route") {
  for (const double x : {0.0, 0.05, 0.3, 0.6, 0.9, 0.99}) {
    const double closed = generating_function_closed(x);
    const double quad = generating_function_quadrature(x);
    CHECK(std::abs(quad - closed) < 1e-10);
  }
  CHECK(generating_function_quadrature(1.0) == 0.0);
}

TEST_CASE("closed-form moments, linear profile") {
  PrecisionScope scope(PrecisionConfig{}.significand_bits);
  const BigFloat pi = big_pi();

  const MomentResult m0 = moment_closed_form(0, GKind::linear());
  const MomentResult m1 = moment_closed_form(1, GKind::linear());
  const MomentResult m2 = moment_closed_form(2, GKind::linear());
  CHECK(abs(m0.value - pi / 2) < BigFloat("1e-70"));
  CHECK(abs(m1.value + 9 * pi / 4) < BigFloat("1e-70"));
  CHECK(abs(m2.value - 75 * pi / 2) < BigFloat("1e-70"));
  CHECK(m0.route == MomentRoute::closed_form);
  CHECK(m0.normalization == Normalization::route_raw);

  // Unit-mass convention pins the k=0 moment to one.
  CHECK(abs(to_unit_mass(m0).value - 1) < BigFloat("1e-70"));
  CHECK(abs(to_unit_mass(m1).value + BigFloat("4.5")) < BigFloat("1e-70"));
  CHECK(abs(to_unit_mass(m2).value - 75) < BigFloat("1e-70"));
}

TEST_CASE("closed-form moments, arcsin profile") {
  PrecisionScope scope(PrecisionConfig{}.significand_bits);
  const BigFloat pi = big_pi();
  const BigFloat ln2 = big_ln2();

  const MomentResult m0 = moment_closed_form(0, GKind::arcsin());
  const MomentResult m1 = moment_closed_form(1, GKind::arcsin());
  CHECK(abs(m0.value - pi * (BigFloat("0.5") + ln2)) < BigFloat("1e-70"));
  CHECK(abs(m1.value - pi * (BigFloat("2.75") + ln2)) < BigFloat("1e-70"));
  CHECK(std::abs(static_cast<double>(m0.value) - 3.7483823) < 1e-5);
  CHECK(std::abs(static_cast<double>(m1.value) - 10.817) < 2e-3);
}

TEST_CASE("unit-mass linear moments alternate in sign") {
  for (std::size_t k = 0; k <= 6; ++k) {
    const BigFloat v = to_unit_mass(moment_closed_form(k, GKind::linear())).value;
    if (k % 2 == 0)
      CHECK(v > 0);
    else
      CHECK(v < 0);
  }
}

TEST_CASE("generic route reproduces both closed forms") {
  for (const auto& kind : {GKind::linear(), GKind::arcsin()}) {
    for (std::size_t k = 0; k <= 10; ++k) {
      const BigFloat closed = moment_closed_form(k, kind).value;
      const BigFloat generic = moment_generic(k, kind).value;
      CHECK(abs(closed - generic) < BigFloat("1e-25") * (1 + abs(closed)));
    }
  }
}

TEST_CASE("generic route input validation") {
  PrecisionScope scope(PrecisionConfig{}.significand_bits);

  // Even-order contamination is rejected.
  Jet bad = Jet::variable(8);
  bad[2] = BigFloat("1e-3");
  CHECK_THROWS_AS(moment_generic(0, bad), std::invalid_argument);
  CHECK_THROWS_AS(GKind::generic(bad), std::invalid_argument);

  // Vanishing first derivative is rejected.
  Jet cubic(7);
  cubic[3] = 1;
  CHECK_THROWS_AS(moment_generic(0, cubic), std::invalid_argument);

  // Short jets report the order they would need.
  try {
    moment_generic(1, Jet::variable(4));
    FAIL("expected JetOrderError");
  } catch (const JetOrderError& e) {
    CHECK(e.required == 5);
  }

  // A valid generic profile passes through the GKind wrapper.
  const GKind custom = GKind::generic(jet_sin(Jet::variable(9)));
  CHECK(abs(moment_generic(1, custom.profile(9)).value -
            moment_closed_form(1, GKind::arcsin()).value) < BigFloat("1e-25"));
}

TEST_CASE("density quadrature matches closed forms for the linear profile") {
  for (std::size_t k = 0; k <= 8; ++k) {
    const double density = static_cast<double>(
        density_moment_quadrature(k, GKind::linear()).value);
    const double closed = static_cast<double>(
        to_unit_mass(moment_closed_form(k, GKind::linear())).value);
    CHECK(std::abs(density - closed) < 1e-8 * std::abs(closed));
  }
}

TEST_CASE("arcsin density split values") {
  const ArcsinDensityParts parts = arcsin_density_parts(0);
  CHECK(std::abs(parts.integral_part - (3.0 - 4.0 * std::log(2.0))) < 1e-10);
  CHECK(parts.contact_part == 2.0 * std::log(2.0) - 4.0);

  // Total at k=0: the route arithmetic gives -(1 + 2 ln2) in unit mass.
  const double total = static_cast<double>(
      density_moment_quadrature(0, GKind::arcsin()).value);
  CHECK(std::abs(total - (-(1.0 + 2.0 * std::log(2.0)))) < 1e-8);
}

TEST_CASE("arcsin density and closed form differ by one fitted constant") {
  // The cross-route constant is measured at k=0 and must hold for all k;
  // its value is reported, not asserted.
  const double c0 = static_cast<double>(density_moment_quadrature(0, GKind::arcsin()).value) /
                    static_cast<double>(to_unit_mass(moment_closed_form(0, GKind::arcsin())).value);
  INFO("fitted arcsin density/closed constant: " << c0);
  for (std::size_t k = 1; k <= 6; ++k) {
    const double density = static_cast<double>(
        density_moment_quadrature(k, GKind::arcsin()).value);
    const double closed = static_cast<double>(
        to_unit_mass(moment_closed_form(k, GKind::arcsin())).value);
    CHECK(std::abs(density - c0 * closed) < 1e-6 * std::abs(density));
  }
}

TEST_CASE("contact term frozen values") {
  // gamma = 1: (1+i)^{-3} = -(1+i)/4, so the f-coefficient collapses to
  // pi (1+i) (2 - ln2).
  const auto term = contact_term(1.0);
  const Complex expected_f = kPi * Complex(1.0, 1.0) * (2.0 - std::log(2.0));
  CHECK(std::abs(term.f_coefficient - expected_f) < 1e-13);
  CHECK(std::abs(term.support_point - Complex(0.0, -2.0)) < 1e-14);

  const Complex mu_contact = mu_functional(ProbePolynomial::one(), 1.0).contact_part;
  CHECK(std::abs(mu_contact - expected_f) < 1e-13);

  // A probe rooted at the support point removes the f(z0) contribution.
  ProbePolynomial rooted;
  rooted.coeffs = {-term.support_point, Complex(1.0, 0.0)};
  CHECK(std::abs(term.evaluate(rooted) - term.fprime_coefficient) < 1e-13);
}

TEST_CASE("mu functional integral part at gamma = 1") {
  const auto mu = mu_functional(ProbePolynomial::one(), 1.0);
  const Complex expected =
      -kPi * Complex(1.0, 1.0) * (3.0 - 4.0 * std::log(2.0)) / 2.0;
  CHECK(std::abs(mu.integral_part - expected) < 1e-9);
  CHECK(std::abs(mu.total - (mu.integral_part + mu.contact_part)) == 0.0);
}

TEST_CASE("mu of monomials reproduces arcsin moments up to the sector factor") {
  // mu(x^k) = -4^{k+1} (1+i/gamma)^{-(2k+3)} M_k with M_k the raw arcsin
  // closed-form moment.
  for (const double gamma : {0.5, 1.0, 2.0}) {
    const Complex w(1.0, 1.0 / gamma);
    for (std::size_t k = 0; k <= 2; ++k) {
      const Complex mu = mu_functional(ProbePolynomial::monomial(k), gamma).total;
      const double mk = static_cast<double>(
          moment_closed_form(k, GKind::arcsin()).value);
      const Complex expected =
          -std::pow(4.0, static_cast<double>(k + 1)) *
          std::pow(w, -static_cast<double>(2 * k + 3)) * mk;
      CHECK(std::abs(mu - expected) < 1e-7 * std::abs(expected));
    }
  }
}

TEST_CASE("mu functional rejects nonpositive gamma") {
  CHECK_THROWS_AS(mu_functional(ProbePolynomial::one(), 0.0), std::invalid_argument);
  CHECK_THROWS_AS(mu_functional(ProbePolynomial::one(), -1.0), std::invalid_argument);
  CHECK_THROWS_AS(contact_term(-2.0), std::invalid_argument);
}

TEST_CASE("cutoff shift produces the pure contact pattern") {
  const auto zero = cutoff_shift_check(0.0, 4);
  for (const BigFloat& d : zero.differences) CHECK(abs(d) < BigFloat("1e-60"));

  const auto shifted = cutoff_shift_check(1.0, 4);
  REQUIRE(shifted.differences.size() == 5);
  for (const BigFloat& d : shifted.differences) CHECK(abs(d - 1) < BigFloat("1e-20"));
  CHECK(shifted.max_deviation < BigFloat("1e-20"));

  // The linear profile has constant x', so the shift cannot move anything.
  const auto linear = cutoff_shift_check(1.0, 4, GKind::linear());
  for (const BigFloat& d : linear.differences) CHECK(abs(d) < BigFloat("1e-60"));

  // Density kernels never reference the generating function, so the shift
  // cannot reach them; spot check the k=0 value against its closed form.
  const double density = static_cast<double>(
      density_moment_quadrature(0, GKind::arcsin()).value);
  CHECK(std::abs(density - (-(1.0 + 2.0 * std::log(2.0)))) < 1e-8);
}

TEST_CASE("doubling the significand changes nothing at the reported scale") {
  PrecisionConfig base;
  PrecisionConfig doubled;
  doubled.significand_bits = base.significand_bits * 2;

  for (const auto& kind : {GKind::linear(), GKind::arcsin()}) {
    for (std::size_t k = 0; k <= 5; ++k) {
      const BigFloat a = moment_closed_form(k, kind, base).value;
      const BigFloat b = moment_closed_form(k, kind, doubled).value;
      CHECK(abs(a - b) < BigFloat("1e-30") * abs(b));
    }
  }
}

TEST_CASE("moment engine determinism") {
  const double d1 = static_cast<double>(density_moment_quadrature(1, GKind::arcsin()).value);
  const double d2 = static_cast<double>(density_moment_quadrature(1, GKind::arcsin()).value);
  CHECK(d1 == d2);

  const auto m1 = mu_functional(ProbePolynomial::monomial(1), 0.7);
  const auto m2 = mu_functional(ProbePolynomial::monomial(1), 0.7);
  CHECK(m1.total.real() == m2.total.real());
  CHECK(m1.total.imag() == m2.total.imag());
}
