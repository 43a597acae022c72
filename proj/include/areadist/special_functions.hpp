#pragma once
// Modified Bessel K0 and the Bickley function Ki1 evaluated from their
// defining integral representations, plus residuals of two classical
// identities built on them.  Both functions are computed by quadrature on
// purpose: they serve as the reference route for the density moments, so
// nothing here may call a canned Bessel routine.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include "areadist/quadrature.hpp"

namespace areadist {

namespace detail {

// Truncation point T with e^{-x cosh T} small enough that the dropped tail
// of ∫ e^{-x cosh t} dt is below tol: bound e^{-x cosh T}/(x sinh T).
inline double cosh_tail_cutoff(double x, double tol, double slack = 5.0) {
  const double c = 1.0 + (std::log(1.0 / tol) + slack) / x;
  // acosh(c) without overflowing c^2 for extreme c.
  return (c > 1e8) ? std::log(2.0 * c) : std::acosh(c);
}

// x / sinh(x) with the removable singularity at 0 filled in.
inline double x_over_sinh(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
  }
  return x / std::sinh(x);
}

}  // namespace detail

// K0(x) = ∫_0^∞ exp(-x cosh t) dt for x > 0.
inline double bessel_k0(double x, const QuadratureSpec& spec = {}) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k0 requires x > 0");
  const double tol = std::min(spec.abs_tol, 1e-12);
  const double T = detail::cosh_tail_cutoff(x, tol, spec.tail_slack);
  return integrate([x](double t) { return std::exp(-x * std::cosh(t)); }, 0.0, T, spec);
}

// e^x K0(x): same integral with the exponential peak divided out, so large
// arguments neither underflow nor lose the leading digits.
inline double bessel_k0_scaled(double x, const QuadratureSpec& spec = {}) {
  if (!(x > 0.0)) throw std::domain_error("bessel_k0_scaled requires x > 0");
  const double tol = std::min(spec.abs_tol, 1e-12);
  const double T = detail::cosh_tail_cutoff(x, tol, spec.tail_slack);
  return integrate([x](double t) { return std::exp(-x * (std::cosh(t) - 1.0)); }, 0.0, T,
                   spec);
}

// Ki1(x) = ∫_0^∞ exp(-x cosh t)/cosh t dt
//        = ∫_0^{pi/2} exp(-x/sin(phi)) dphi   for x >= 0.
// The phi-form is used below the crossover, the cosh-form above it.
inline double ki1(double x, const QuadratureSpec& spec = {}, double crossover = 1.0) {
  if (!(x >= 0.0)) throw std::domain_error("ki1 requires x >= 0");
  if (x == 0.0) return std::numbers::pi / 2;  // integrand identically 1
  if (x < crossover) {
    return integrate([x](double phi) { return std::exp(-x / std::sin(phi)); }, 0.0,
                     std::numbers::pi / 2, spec);
  }
  const double tol = std::min(spec.abs_tol, 1e-12);
  const double T = detail::cosh_tail_cutoff(x, tol, spec.tail_slack);
  return integrate([x](double t) { return std::exp(-x * std::cosh(t)) / std::cosh(t); },
                   0.0, T, spec);
}

// Ki1 continued to complex argument with positive real part, cosh-form only.
// The continued kernel decays as exp(-Re z), which is what the comparison
// decay fits probe.
inline std::complex<double> ki1_complex(std::complex<double> z,
                                        const QuadratureSpec& spec = {}) {
  if (!(z.real() > 0.0)) throw std::domain_error("ki1_complex requires Re z > 0");
  const double tol = std::min(spec.abs_tol, 1e-12);
  const double T = detail::cosh_tail_cutoff(z.real(), tol, spec.tail_slack);
  return integrate(
      [z](double t) {
        const double c = std::cosh(t);
        return std::exp(-z * c) / c;
      },
      0.0, T, spec);
}

// Left side of the identity checked by cosh_k0_identity_residual.
inline double inv_sqrt_one_minus_sq(double g) {
  if (!(std::abs(g) < 1.0)) throw std::domain_error("requires |g| < 1");
  return 1.0 / std::sqrt(1.0 - g * g);
}

// Residual of  1/sqrt(1-g^2) = (2/pi) ∫_0^∞ cosh(g l) K0(l) dl,  |g| < 1.
inline double cosh_k0_identity_residual(double g, const QuadratureSpec& spec = {}) {
  if (!(std::abs(g) < 1.0)) throw std::domain_error("identity requires |g| < 1");
  // Inner Bessel evaluations run two digits tighter than any sane outer
  // demand; pushing further collides with the double roundoff floor.
  QuadratureSpec inner = spec;
  inner.abs_tol = 1e-14;
  inner.rel_tol = 2e-14;
  const double decay = 1.0 - std::abs(g);
  const double L = exp_tail_truncation(1.0, decay, std::min(spec.abs_tol, 1e-12),
                                       spec.tail_slack);
  // cosh(g l) K0(l) written with e^l K0(l) so neither factor overflows when
  // g l grows past the exponent range.
  auto f = [&](double l) {
    const double k0e = bessel_k0_scaled(l, inner);
    return 0.5 * (std::exp((g - 1.0) * l) + std::exp(-(g + 1.0) * l)) * k0e;
  };
  const double integral = integrate(f, 0.0, L, spec);
  return inv_sqrt_one_minus_sq(g) - (2.0 / std::numbers::pi) * integral;
}

// Left side of the identity checked by sinh_kernel_identity_residual.
inline double cos_log_combination(double g) {
  if (!(std::abs(g) < std::numbers::pi)) throw std::domain_error("requires |g| < pi");
  const double c = std::cos(g);
  return 0.5 * g * std::sin(g) - 0.5 + 0.5 * c * std::log(2.0 * (1.0 + c));
}

// Residual of  (g/2) sin g - 1/2 + (1/2) cos g ln(2(1+cos g))
//            = ∫_0^∞ [l/(l^2+1)] cosh(g l)/sinh(pi l) dl,  |g| < pi.
inline double sinh_kernel_identity_residual(double g, const QuadratureSpec& spec = {}) {
  if (!(std::abs(g) < std::numbers::pi)) throw std::domain_error("identity requires |g| < pi");
  const double decay = std::numbers::pi - std::abs(g);
  const double L = exp_tail_truncation(1.0, decay, std::min(spec.abs_tol, 1e-12),
                                       spec.tail_slack);
  auto f = [g](double l) {
    const double pi = std::numbers::pi;
    if (pi * l < 1e-4) {
      // Removable singularity at l = 0.
      const double kernel = detail::x_over_sinh(pi * l) / pi;
      return kernel * std::cosh(g * l) / (l * l + 1.0);
    }
    // cosh(g l)/sinh(pi l) in a form whose exponents stay negative.
    const double ratio = (std::exp((g - pi) * l) + std::exp(-(g + pi) * l)) /
                         (1.0 - std::exp(-2.0 * pi * l));
    return l * ratio / (l * l + 1.0);
  };
  const double integral = integrate(f, 0.0, L, spec);
  return cos_log_combination(g) - integral;
}

}  // namespace areadist
