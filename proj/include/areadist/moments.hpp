#pragma once
// Moments of the group-average generating function, computed along three
// independent routes: closed-form derivative expressions, the generic
// generating-function composition, and quadrature against the density-side
// kernels.  Also evaluates the distributional functional mu(f) whose contact
// terms sit at a complex support point, and the cutoff-shift consistency
// check for the additive constant in the generating function.
//
// Conventions: moment index k refers to the 2k-th even moment.  route_raw
// keeps the closed-form pi factors; unit_mass divides by the linear-profile
// k=0 value so that that moment is exactly 1.

#include "areadist/jet.hpp"
#include "areadist/quadrature.hpp"
#include "areadist/special_functions.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace areadist {

using Complex = std::complex<double>;

enum class MomentRoute { closed_form, generating_function, density_quadrature };
enum class Normalization { route_raw, unit_mass };

struct MomentResult {
  std::size_t k;
  BigFloat value;
  Normalization normalization;
  MomentRoute route;
};

// Profile selector: the change of variable x(g), odd with x'(0) != 0.
class GKind {
 public:
  enum class Tag { linear, arcsin, generic };

  static GKind linear() { return GKind(Tag::linear); }
  static GKind arcsin() { return GKind(Tag::arcsin); }

  static GKind generic(Jet x_of_g) {
    for (std::size_t i = 0; i <= x_of_g.order(); i += 2)
      if (x_of_g[i] != 0)
        throw std::invalid_argument("profile x(g) must be odd: even-order coefficient present");
    if (x_of_g.order() < 1 || x_of_g[1] == 0)
      throw std::invalid_argument("profile x(g) must have x'(0) != 0");
    GKind kind(Tag::generic);
    kind.x_of_g_ = std::move(x_of_g);
    return kind;
  }

  Tag tag() const { return tag_; }

  // The series of x(g) to the requested order.
  Jet profile(std::size_t order) const {
    switch (tag_) {
      case Tag::linear:
        return Jet::variable(order);
      case Tag::arcsin:
        return jet_sin(Jet::variable(order));
      case Tag::generic:
        if (x_of_g_->order() < order)
          throw JetOrderError("generic profile jet is too short", order);
        return x_of_g_->truncated(order);
    }
    throw std::logic_error("unreachable");
  }

 private:
  explicit GKind(Tag tag) : tag_(tag) {}
  Tag tag_;
  std::optional<Jet> x_of_g_;
};

// ---------------------------------------------------------------------------
// Generating function I(x) on [0, 1].

inline double generating_function_closed(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("generating function argument must lie in [0, 1]");
  const double pi = 3.14159265358979323846;
  return pi * std::log1p(std::sqrt((1.0 - x) * (1.0 + x)));
}

// Radial integral route: pi * int_x^1 (1/sqrt(1-r^2) - 1) dr / r.  The
// substitution r = 1 - t^2 removes the inverse-square-root endpoint.
inline double generating_function_quadrature(double x, const QuadratureSpec& spec = {}) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::invalid_argument("generating function argument must lie in [0, 1]");
  if (x == 1.0) return 0.0;
  const double pi = 3.14159265358979323846;
  const auto integrand = [](double t) {
    const double r = 1.0 - t * t;
    return (2.0 / std::sqrt(2.0 - t * t) - 2.0 * t) / r;
  };
  return pi * integrate(integrand, 0.0, std::sqrt(1.0 - x), spec);
}

// I composed with an odd series x(g); carries the pi factor.
inline Jet generating_function_jet(const Jet& x) {
  const std::size_t n = x.order();
  if (x[0] != 0) throw std::invalid_argument("series for I(x(g)) requires x(0) = 0");
  const Jet inner = jet_sqrt(Jet::constant(1, n) - x * x);
  return big_pi() * jet_log(Jet::constant(1, n) + inner);
}

// ---------------------------------------------------------------------------
// Closed-form derivative route.

inline MomentResult moment_closed_form(std::size_t k, const GKind& kind,
                                       const PrecisionConfig& config = {}) {
  validate(config);
  if (kind.tag() == GKind::Tag::generic)
    throw std::invalid_argument("closed forms exist for the linear and arcsin profiles only");
  const std::size_t needed = 2 * k + 2;
  if (needed > config.default_order)
    throw JetOrderError("moment index exceeds the jet order budget", needed);
  PrecisionScope scope(config.significand_bits);

  BigFloat value;
  if (kind.tag() == GKind::Tag::linear) {
    // (d/dg)^{2k+1} of [1 - (1-g^2)^{-1/2}] / g at 0.
    const Jet g = Jet::variable(needed);
    const Jet u =
        Jet::constant(1, needed) - jet_pow(Jet::constant(1, needed) - g * g, BigFloat(-0.5));
    value = big_pi() * derivative_at_zero(odd_quotient(u), 2 * k + 1);
  } else {
    // (d/dg)^{2k+2} of cos g * ln(1 + cos g) at 0.
    const Jet c = jet_cos(Jet::variable(needed));
    const Jet f = c * jet_log(Jet::constant(1, needed) + c);
    value = big_pi() * derivative_at_zero(f, 2 * k + 2);
  }
  if (k % 2 == 0) value = -value;  // sign (-1)^{k+1}
  return {k, value, Normalization::route_raw, MomentRoute::closed_form};
}

// ---------------------------------------------------------------------------
// Generic generating-function route: (-1)^{k+1} (d/dg)^{2k+2} [x' I(x)] at 0.

inline MomentResult moment_generic(std::size_t k, const Jet& x_of_g,
                                   double shift = 0.0) {
  for (std::size_t i = 0; i <= x_of_g.order(); i += 2)
    if (x_of_g[i] != 0)
      throw std::invalid_argument("profile x(g) must be odd: even-order coefficient present");
  if (x_of_g.order() < 1 || x_of_g[1] == 0)
    throw std::invalid_argument("profile x(g) must have x'(0) != 0");
  const std::size_t required = 2 * k + 3;
  if (x_of_g.order() < required)
    throw JetOrderError("profile jet order insufficient for this moment", required);

  const Jet xp = jet_derivative(x_of_g);
  Jet big_i = generating_function_jet(x_of_g).truncated(xp.order());
  big_i[0] += BigFloat(shift);
  BigFloat value = derivative_at_zero(xp * big_i, 2 * k + 2);
  if (k % 2 == 0) value = -value;
  return {k, value, Normalization::route_raw, MomentRoute::generating_function};
}

inline MomentResult moment_generic(std::size_t k, const GKind& kind,
                                   const PrecisionConfig& config = {}) {
  validate(config);
  const std::size_t required = 2 * k + 3;
  if (required > config.default_order)
    throw JetOrderError("moment index exceeds the jet order budget", required);
  PrecisionScope scope(config.significand_bits);
  return moment_generic(k, kind.profile(required));
}

// Mass of the closed-form routes: the linear k=0 moment.
inline BigFloat closed_route_mass() { return big_pi() / 2; }

inline MomentResult to_unit_mass(MomentResult r) {
  if (r.normalization == Normalization::unit_mass) return r;
  if (r.route == MomentRoute::density_quadrature)
    throw std::logic_error("density results are normalized at computation time");
  r.value /= closed_route_mass();
  r.normalization = Normalization::unit_mass;
  return r;
}

// ---------------------------------------------------------------------------
// Density-side quadrature route.

namespace detail {

inline QuadratureSpec kernel_spec() {
  // Relative tolerance dominates: the kernel spans many decades and the
  // absolute floor must not clip evaluations near the integrand peak.
  QuadratureSpec spec;
  spec.abs_tol = 1e-290;
  spec.rel_tol = 1e-13;
  spec.max_subdivisions = 2000;
  return spec;
}

inline double density_linear_raw(std::size_t k, const QuadratureSpec& spec) {
  const double pi = 3.14159265358979323846;
  const double poly = 2.0 * static_cast<double>(k) + 1.0;
  const double cutoff = exp_tail_truncation(poly, 1.0, spec.abs_tol);
  const QuadratureSpec inner = kernel_spec();
  const auto integrand = [&](double l) { return ki1(l, inner) * std::pow(l, poly); };
  const double integral = integrate(integrand, 0.0, cutoff, spec);
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  return sign * (4.0 / pi) * integral;
}

}  // namespace detail

struct ArcsinDensityParts {
  double integral_part;
  double contact_part;
};

// Raw arcsin-profile density moment, split into the radial integral against
// l^{2k+3} / ((l^2+1) sinh(pi l)) and the exact contact contribution
// (2 ln2 - 4) f(1) - 4 f'(1) for f(x) = x^k.
inline ArcsinDensityParts arcsin_density_parts(std::size_t k, const QuadratureSpec& spec = {}) {
  const double pi = 3.14159265358979323846;
  const double poly = 2.0 * static_cast<double>(k) + 3.0;
  const double cutoff = exp_tail_truncation(poly, pi, spec.abs_tol);
  const auto integrand = [&](double l) {
    return std::pow(l, poly) / ((l * l + 1.0) * std::sinh(pi * l));
  };
  const double sign = (k % 2 == 0) ? 1.0 : -1.0;
  const double integral = sign * 4.0 * integrate(integrand, 0.0, cutoff, spec);
  const double contact = (2.0 * std::log(2.0) - 4.0) - 4.0 * static_cast<double>(k);
  return {integral, contact};
}

inline MomentResult density_moment_quadrature(std::size_t k, const GKind& kind,
                                              const QuadratureSpec& spec = {}) {
  if (kind.tag() == GKind::Tag::generic)
    throw std::invalid_argument("density kernels exist for the linear and arcsin profiles only");
  const double mass = detail::density_linear_raw(0, spec);
  double raw;
  if (kind.tag() == GKind::Tag::linear) {
    raw = detail::density_linear_raw(k, spec);
  } else {
    const auto parts = arcsin_density_parts(k, spec);
    raw = parts.integral_part + parts.contact_part;
  }
  return {k, BigFloat(raw / mass), Normalization::unit_mass,
          MomentRoute::density_quadrature};
}

// ---------------------------------------------------------------------------
// The distributional functional mu(f).

// Polynomial probe in the squared-area variable.
struct ProbePolynomial {
  std::vector<Complex> coeffs;  // f(x) = sum_j coeffs[j] x^j

  Complex eval(Complex x) const {
    Complex acc(0.0, 0.0);
    for (std::size_t j = coeffs.size(); j-- > 0;) acc = acc * x + coeffs[j];
    return acc;
  }

  Complex derivative_eval(Complex x) const {
    Complex acc(0.0, 0.0);
    for (std::size_t j = coeffs.size(); j-- > 1;)
      acc = acc * x + static_cast<double>(j) * coeffs[j];
    return acc;
  }

  std::size_t degree() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  static ProbePolynomial one() { return {{Complex(1.0, 0.0)}}; }

  static ProbePolynomial monomial(std::size_t k) {
    ProbePolynomial p;
    p.coeffs.assign(k + 1, Complex(0.0, 0.0));
    p.coeffs[k] = Complex(1.0, 0.0);
    return p;
  }
};

// Contact contribution with support at the nonphysical point z0.
struct ContactTerm {
  Complex support_point;       // z0 = 4 (1 + i/gamma)^{-2}
  Complex f_coefficient;       // multiplies f(z0)
  Complex fprime_coefficient;  // multiplies f'(z0)

  Complex evaluate(const ProbePolynomial& f) const {
    return f_coefficient * f.eval(support_point) +
           fprime_coefficient * f.derivative_eval(support_point);
  }
};

inline ContactTerm contact_term(double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const double pi = 3.14159265358979323846;
  const Complex w(1.0, 1.0 / gamma);
  const Complex w2 = w * w;
  const Complex w3 = w2 * w;
  const Complex w5 = w3 * w2;
  ContactTerm term;
  term.support_point = 4.0 / w2;
  term.f_coefficient = 4.0 * pi * (std::log(2.0) - 2.0) / w3;
  term.fprime_coefficient = -32.0 * pi / w5;
  return term;
}

struct MuResult {
  Complex integral_part;
  Complex contact_part;
  Complex total;
};

// mu(f) = 2 pi i * int_0^inf v^2 (qv/4) / [((qv/2)^2 + 1) sinh(pi q v / 2)]
//         * f(v^2) dv  + contact terms,  with q = 1/gamma - i.
inline MuResult mu_functional(const ProbePolynomial& f, double gamma,
                              const QuadratureSpec& spec = {}) {
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  const double pi = 3.14159265358979323846;
  const Complex q(1.0 / gamma, -1.0);

  const double poly = 2.0 * static_cast<double>(f.degree()) + 3.0;
  const double decay = pi / (2.0 * gamma);
  const double cutoff = exp_tail_truncation(poly, decay, spec.abs_tol);
  const auto integrand = [&](double v) {
    const Complex qv = q * v;
    const Complex denom = (qv * qv * 0.25 + 1.0) * std::sinh(0.5 * pi * qv);
    return v * v * (qv * 0.25) / denom * f.eval(Complex(v * v, 0.0));
  };
  const Complex integral =
      Complex(0.0, 2.0 * pi) * integrate(integrand, 0.0, cutoff, spec);

  const Complex contact = contact_term(gamma).evaluate(f);
  return {integral, contact, integral + contact};
}

// ---------------------------------------------------------------------------
// Cutoff-shift consistency: replacing I by I + C moves every arcsin-profile
// moment by the same constant C (a pure contact pattern) and cannot touch
// the density-side kernels, which never reference I.

struct CutoffShiftReport {
  double shift;
  std::vector<BigFloat> differences;   // per k: shifted moment - base moment
  BigFloat max_deviation;              // max_k |difference_k - C|
};

inline CutoffShiftReport cutoff_shift_check(double C, std::size_t k_max,
                                            const GKind& kind = GKind::arcsin(),
                                            const PrecisionConfig& config = {}) {
  validate(config);
  PrecisionScope scope(config.significand_bits);
  const std::size_t order = 2 * k_max + 3;
  const Jet x = kind.profile(order);

  CutoffShiftReport report;
  report.shift = C;
  report.max_deviation = 0;
  const Jet xp = jet_derivative(x);
  for (std::size_t k = 0; k <= k_max; ++k) {
    const BigFloat base = moment_generic(k, x, 0.0).value;
    const BigFloat shifted = moment_generic(k, x, C).value;
    const BigFloat diff = shifted - base;
    report.differences.push_back(diff);
    // The shift can only enter through the contact pattern
    // C * (-1)^{k+1} (d/dg)^{2k+2} x'(g) at 0; constant C for the arcsin
    // profile, zero for the linear one.
    BigFloat expected = BigFloat(C) * derivative_at_zero(xp, 2 * k + 2);
    if (k % 2 == 0) expected = -expected;
    const BigFloat dev = abs(diff - expected);
    if (dev > report.max_deviation) report.max_deviation = dev;
  }
  return report;
}

}  // namespace areadist
