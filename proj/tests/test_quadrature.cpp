#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

#include "areadist/quadrature.hpp"

using namespace areadist;

TEST_CASE("polynomial and trig integrals at tight tolerance") {
  auto one_third = integrate([](double x) { return x * x; }, 0.0, 1.0);
  CHECK(std::abs(one_third - 1.0 / 3.0) < 1e-14);

  auto two = integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(std::abs(two - 2.0) < 1e-13);
}

TEST_CASE("integrable endpoint singularity") {
  // ∫_0^1 x^{-1/2} dx = 2; the rule never evaluates the endpoints.
  QuadratureSpec spec;
  spec.abs_tol = 1e-11;
  spec.rel_tol = 1e-11;
  auto v = integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, spec);
  CHECK(std::abs(v - 2.0) < 1e-9);
}

TEST_CASE("complex-valued integrand") {
  using namespace std::complex_literals;
  auto v = integrate([](double x) { return std::exp(1i * x); }, 0.0, 1.0);
  CHECK(std::abs(v.real() - std::sin(1.0)) < 1e-13);
  CHECK(std::abs(v.imag() - (1.0 - std::cos(1.0))) < 1e-13);
}

TEST_CASE("tail truncation solves the bound equation") {
  const double L = exp_tail_truncation(3.0, 2.0, 1e-12, 5.0);
  const double lhs = 3.0 * std::log(L) - 2.0 * L;
  CHECK(lhs <= std::log(1e-12) - 5.0 + 1e-6);
  // Tightening the tolerance pushes the cutoff out.
  CHECK(exp_tail_truncation(3.0, 2.0, 1e-16) > L);
}

TEST_CASE("semi-infinite integrals with exponential decay") {
  auto one = integrate_decaying([](double l) { return std::exp(-l); }, 0.0, 0.0, 1.0);
  CHECK(std::abs(one - 1.0) < 1e-11);

  // ∫_0^∞ l^3 e^{-2l} dl = 3!/2^4.
  auto v = integrate_decaying([](double l) { return l * l * l * std::exp(-2.0 * l); },
                              0.0, 3.0, 2.0);
  CHECK(std::abs(v - 3.0 / 8.0) < 1e-11);
}

TEST_CASE("budget exhaustion raises a diagnostic error") {
  QuadratureSpec spec;
  spec.max_subdivisions = 3;
  spec.abs_tol = 1e-15;
  spec.rel_tol = 1e-15;
  auto f = [](double x) { return 1.0 / std::sqrt(x); };
  CHECK_THROWS_AS(integrate(f, 0.0, 1.0, spec), QuadratureError);
  try {
    integrate(f, 0.0, 1.0, spec);
  } catch (const QuadratureError& e) {
    CHECK(e.achieved_error > 0.0);
    CHECK(e.worst_a >= 0.0);
    CHECK(e.worst_b <= 1.0);
  }
}

TEST_CASE("identical inputs reproduce identical values") {
  auto f = [](double x) { return std::exp(-x * x) * std::cos(3.0 * x); };
  const double a = integrate(f, 0.0, 4.0);
  const double b = integrate(f, 0.0, 4.0);
  CHECK(a == b);
}
