#pragma once
// The reconstructed squared-area density: pointwise evaluation with pole
// bookkeeping, the Euclidean variant, asymptotic decay-rate fits, local
// maxima along the physical ray, the predicted discrete spectrum, and the
// factorized multi-face density.
//
// Conventions: v = sqrt(v^2) is the principal branch, so spacelike v^2 < 0
// maps to v = i|v|.  The density carries the sector parameter q = 1/gamma - i
// and has poles at v^2 = -4 n^2 / q^2, n >= 1 (n = 1 doubled by the
// quadratic denominator factor).  Evaluation refuses within 1e-6 of a pole.

#include "areadist/fitting.hpp"
#include "areadist/quadrature.hpp"
#include "areadist/special_functions.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace areadist {

using Complex = std::complex<double>;

enum class Region { spacelike, timelike };

struct GammaParam {
  double gamma;
  explicit GammaParam(double g) : gamma(g) {
    if (!(g > 0.0) || !std::isfinite(g))
      throw std::invalid_argument("gamma must satisfy 0 < gamma < infinity");
  }
};

struct SquaredArea {
  enum class Kind { spacelike, timelike, nonphysical };

  Complex v2;
  Kind classification;
  Complex v;      // principal square root
  double abs_v;

  static SquaredArea from_value(Complex value) {
    SquaredArea a;
    a.v2 = value;
    if (value.imag() != 0.0)
      a.classification = Kind::nonphysical;
    else if (value.real() < 0.0)
      a.classification = Kind::spacelike;
    else
      a.classification = Kind::timelike;
    // Pin the branch on the negative real axis to +i|v|.
    a.v = (value.imag() == 0.0 && value.real() < 0.0)
              ? Complex(0.0, std::sqrt(-value.real()))
              : std::sqrt(value);
    a.abs_v = std::abs(a.v);
    return a;
  }

  static SquaredArea on_ray(Region region, double abs_v) {
    if (!(abs_v >= 0.0)) throw std::invalid_argument("|v| must be nonnegative");
    const double s = region == Region::spacelike ? -1.0 : 1.0;
    return from_value(Complex(s * abs_v * abs_v, 0.0));
  }
};

struct DensityPoint {
  double value;
  double pole_distance;  // distance in the v^2 plane to the nearest pole
};

class PoleError : public std::domain_error {
 public:
  PoleError(const std::string& msg, int pole_index, Complex pole_location)
      : std::domain_error(msg), n(pole_index), pole(pole_location) {}
  int n;
  Complex pole;
};

namespace detail {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPoleRefusal = 1e-6;

// One sector factor (1/2pi) (x / sinh x) / (c^2 u^2 / 4 + 1) with
// x = (pi/2) c u, plus the distance from u^2 to the factor's pole set
// u^2 = -4 n^2 / c^2.
struct SectorFactor {
  Complex value;
  double pole_distance;
  int nearest_n;
  Complex nearest_pole;
};

inline Complex x_over_sinh_complex(Complex x) {
  if (x.real() < 0.0) x = -x;  // even function
  const double mag = std::abs(x);
  if (mag < 1e-4) {
    const Complex x2 = x * x;
    return 1.0 - x2 / 6.0 + 7.0 * x2 * x2 / 360.0;
  }
  if (x.real() > 40.0) {
    // sinh x = e^x (1 - e^{-2x}) / 2 with the correction below roundoff.
    return 2.0 * x * std::exp(-x);
  }
  return x / std::sinh(x);
}

inline SectorFactor sector_factor(Complex c, Complex u) {
  if (c == Complex(0.0, 0.0)) {
    // The factor degenerates to the constant 1/2pi with an empty pole set.
    return {Complex(1.0 / (2.0 * kPi), 0.0),
            std::numeric_limits<double>::infinity(), 0, Complex(0.0, 0.0)};
  }
  const Complex u2 = u * u;
  const Complex x = 0.5 * kPi * c * u;
  const Complex quad = 0.25 * c * c * u2 + 1.0;
  SectorFactor out;
  out.value = x_over_sinh_complex(x) / (2.0 * kPi * quad);

  const Complex pole_unit = -4.0 / (c * c);  // pole at n^2 * pole_unit
  const double n_guess = std::sqrt(std::abs(u2) / std::abs(pole_unit));
  const int lo = std::max(1, static_cast<int>(n_guess) - 2);
  out.pole_distance = std::abs(u2 - pole_unit);
  out.nearest_n = 1;
  out.nearest_pole = pole_unit;
  for (int n = lo; n <= lo + 5; ++n) {
    const Complex pole = static_cast<double>(n) * static_cast<double>(n) * pole_unit;
    const double d = std::abs(u2 - pole);
    if (d < out.pole_distance) {
      out.pole_distance = d;
      out.nearest_n = n;
      out.nearest_pole = pole;
    }
  }
  return out;
}

inline void refuse_near_pole(const SectorFactor& f) {
  if (f.pole_distance < kPoleRefusal)
    throw PoleError("evaluation point within the pole refusal radius", f.nearest_n,
                    f.nearest_pole);
}

}  // namespace detail

// Minkowski density: squared modulus of the sector factor at q = 1/gamma - i.
inline DensityPoint n0_density(const SquaredArea& v2, const GammaParam& gp) {
  const Complex q(1.0 / gp.gamma, -1.0);
  const auto factor = detail::sector_factor(q, v2.v);
  detail::refuse_near_pole(factor);
  return {std::norm(factor.value), factor.pole_distance};
}

// Euclidean density: product of the two real sector factors with
// c = 1/gamma_E + 1 and c = 1/gamma_E - 1.  A complex gamma_E continues the
// expression; on gamma_E = -i gamma the slice vplus = vminus reproduces the
// Minkowski spacelike density exactly.
inline DensityPoint n0_euclidean(double vplus, double vminus, Complex gamma_e) {
  if (!(vplus >= 0.0) || !(vminus >= 0.0))
    throw std::invalid_argument("Euclidean arguments must be nonnegative");
  if (gamma_e == Complex(0.0, 0.0))
    throw std::invalid_argument("gamma_E must be nonzero");
  const Complex cp = 1.0 / gamma_e + 1.0;
  const Complex cm = 1.0 / gamma_e - 1.0;
  const auto fp = detail::sector_factor(cp, Complex(vplus, 0.0));
  const auto fm = detail::sector_factor(cm, Complex(vminus, 0.0));
  detail::refuse_near_pole(fp);
  detail::refuse_near_pole(fm);
  const Complex product = fp.value * fm.value;
  return {product.real(), std::min(fp.pole_distance, fm.pole_distance)};
}

// ---------------------------------------------------------------------------
// Asymptotic decay rates.

enum class DensityModel { reconstructed, linear_comparison, bessel_model };

struct FitWindow {
  double lo = 5.0;
  double hi = 30.0;
  std::size_t points = 26;
};

struct DecayRateResult {
  double predicted;
  double fitted;
  double fit_residual;
};

// Log-slope fit of the density along the physical ray with the known
// algebraic prefactor divided out, leaving the pure exponential.
inline DecayRateResult decay_rate(Region region, const GammaParam& gp,
                                  DensityModel model = DensityModel::reconstructed,
                                  const FitWindow& window = {}) {
  if (!(window.hi - window.lo >= 1.0) || window.points < 4)
    throw std::invalid_argument("decay fit window too narrow");
  if (model == DensityModel::bessel_model && region == Region::timelike)
    throw std::invalid_argument("the Bessel model applies to the spacelike ray only");

  const Complex q(1.0 / gp.gamma, -1.0);
  double predicted = 0.0;
  switch (model) {
    case DensityModel::reconstructed:
      predicted = region == Region::spacelike ? detail::kPi : detail::kPi / gp.gamma;
      break;
    case DensityModel::linear_comparison:
      predicted = region == Region::spacelike ? 1.0 : 1.0 / gp.gamma;
      break;
    case DensityModel::bessel_model:
      predicted = 1.0;
      break;
  }

  std::vector<double> ts(window.points), logs(window.points);
  for (std::size_t i = 0; i < window.points; ++i) {
    const double t =
        window.lo + (window.hi - window.lo) * static_cast<double>(i) /
                        static_cast<double>(window.points - 1);
    ts[i] = t;
    const SquaredArea v2 = SquaredArea::on_ray(region, t);
    double corrected = 0.0;
    switch (model) {
      case DensityModel::reconstructed: {
        const auto f = detail::sector_factor(q, v2.v);
        detail::refuse_near_pole(f);
        // value = (1/4pi^2) |x|^2 / (|sinh x|^2 |quad|^2); keep 1/|sinh|^2.
        const Complex x = 0.5 * detail::kPi * q * v2.v;
        const Complex quad = 0.25 * q * q * v2.v2 + 1.0;
        corrected = std::norm(f.value) * std::norm(quad) * 4.0 * detail::kPi *
                    detail::kPi / std::norm(x);
        break;
      }
      case DensityModel::linear_comparison: {
        const Complex z = 0.5 * q * v2.v;
        // Relative tolerance must drive the kernel quadrature: the values
        // span many orders of magnitude across the fit window.
        QuadratureSpec kernel_spec;
        kernel_spec.abs_tol = 1e-290;
        kernel_spec.rel_tol = 1e-11;
        const Complex k = ki1_complex(z, kernel_spec);
        corrected = std::norm(k) * std::abs(z);  // divide the 1/sqrt(z) prefactor
        break;
      }
      case DensityModel::bessel_model: {
        // bessel_k0_scaled carries e^t K0; restore the decay in log space.
        logs[i] = std::log(2.0 * bessel_k0_scaled(t) * std::sqrt(t)) - t;
        continue;
      }
    }
    logs[i] = std::log(corrected);
  }

  const LinearFit fit = linear_fit(ts, logs);
  return {predicted, -fit.slope, fit.max_residual};
}

// ---------------------------------------------------------------------------
// Local maxima along the physical ray.

struct LocalMaximum {
  double location;    // |v| of the refined comb maximum
  double value;       // density value at that location
  double prominence;  // relative height of the comb peak above its valleys
};

struct MaximaScan {
  std::vector<LocalMaximum> maxima;
  double grid_step;
  double scan_limit;
  double expected_spacing;
};

inline double predicted_spectrum(const GammaParam& gp, Region region, int n) {
  if (n < 1) throw std::invalid_argument("spectrum index must be >= 1");
  return region == Region::spacelike ? gp.gamma * static_cast<double>(n)
                                     : static_cast<double>(n);
}

// The resonance comb of the density lives in the 1/|sinh x|^2 factor, which
// oscillates about the smooth envelope 2/cosh(2 Re x).  Both the algebraic
// prefactor |x|^2/|quad|^2 and that envelope drag raw maxima off the comb, so
// the scan brackets and refines the normalized oscillation
//   cosh(2a)/(sinh^2 a + sin^2 b),  x = a + ib,
// whose peak shifts are tanh-bounded.  Written in 1/sinh^2 a form so the far
// tail degrades to the flat value 2 instead of overflowing.  Reported values
// are the raw density at the refined locations.
inline MaximaScan find_local_maxima(const GammaParam& gp, Region region, int n_max,
                                    double prominence_floor = 0.01) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  const double spacing = region == Region::spacelike ? 2.0 * gp.gamma : 2.0;
  const double step = spacing / 50.0;
  const double limit = (static_cast<double>(n_max) + 0.5) * spacing;

  const Complex q(1.0 / gp.gamma, -1.0);
  const auto comb = [&](double t) {
    const Complex x = 0.5 * detail::kPi * q * SquaredArea::on_ray(region, t).v;
    const double s = std::sinh(x.real()) * std::sinh(x.real());
    const double osc = std::sin(x.imag()) * std::sin(x.imag());
    return (2.0 + 1.0 / s) / (1.0 + osc / s);
  };

  std::vector<double> values;
  std::vector<double> grid;
  for (double t = step; t <= limit; t += step) {
    grid.push_back(t);
    values.push_back(comb(t));
  }

  MaximaScan scan;
  scan.grid_step = step;
  scan.scan_limit = limit;
  scan.expected_spacing = spacing;

  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (!(values[i] > values[i - 1] && values[i] > values[i + 1])) continue;
    // Neighboring minima bound the prominence.
    double left_min = values[i];
    for (std::size_t j = i; j-- > 0;) {
      left_min = std::min(left_min, values[j]);
      if (j > 0 && values[j - 1] > values[j]) break;
    }
    double right_min = values[i];
    for (std::size_t j = i + 1; j < values.size(); ++j) {
      right_min = std::min(right_min, values[j]);
      if (j + 1 < values.size() && values[j + 1] > values[j]) break;
    }
    const double higher_min = std::max(left_min, right_min);
    const double prominence = (values[i] - higher_min) / values[i];
    if (prominence < prominence_floor) continue;

    const double refined = golden_section_max(comb, grid[i - 1], grid[i + 1]);
    const double density = n0_density(SquaredArea::on_ray(region, refined), gp).value;
    scan.maxima.push_back({refined, density, prominence});
  }
  return scan;
}

// Mean ratio of scanned maxima locations to the predicted spectrum points.
inline double maxima_spectrum_ratio(const GammaParam& gp, Region region, int n_max) {
  const MaximaScan scan = find_local_maxima(gp, region, n_max);
  if (scan.maxima.empty())
    throw std::runtime_error("no maxima above the prominence floor to compare");
  double acc = 0.0;
  int n = 0;
  for (const LocalMaximum& m : scan.maxima) {
    ++n;
    acc += m.location / predicted_spectrum(gp, region, n);
  }
  return acc / static_cast<double>(n);
}

// ---------------------------------------------------------------------------
// Factorized multi-face density (the zero-coupling special case).

class FactorizedPoleError : public PoleError {
 public:
  FactorizedPoleError(const PoleError& inner, std::size_t entry_index)
      : PoleError(std::string(inner.what()) + " (list entry " +
                      std::to_string(entry_index) + ")",
                  inner.n, inner.pole),
        entry(entry_index) {}
  std::size_t entry;
};

inline double factorized_density(const std::vector<SquaredArea>& faces,
                                 const GammaParam& gp) {
  double product = 1.0;
  for (std::size_t i = 0; i < faces.size(); ++i) {
    try {
      product *= n0_density(faces[i], gp).value;
    } catch (const PoleError& e) {
      throw FactorizedPoleError(e, i);
    }
  }
  return product;
}

}  // namespace areadist
