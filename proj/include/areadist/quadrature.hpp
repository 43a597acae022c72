#pragma once
// Adaptive Gauss-Kronrod integration over finite and semi-infinite
// intervals.  The 15-point rule and error inflation follow the classic
// QUADPACK construction; the worst interval in the active set is split
// until the global error estimate clears the tolerance.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace areadist {

struct QuadratureSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
  // Safety margin (in e-folds) applied on top of the analytic tail bound
  // when a semi-infinite integral is truncated.
  double tail_slack = 5.0;
};

struct QuadratureError : std::runtime_error {
  double achieved_error;
  double worst_a, worst_b;
  QuadratureError(const std::string& msg, double err, double a, double b)
      : std::runtime_error(msg), achieved_error(err), worst_a(a), worst_b(b) {}
};

namespace detail {

inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }

// 15-point Kronrod abscissae with the embedded 7-point Gauss weights.
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

template <class F>
struct Gk15Result {
  using Value = std::invoke_result_t<F, double>;
  Value integral;
  double error;
};

template <class F>
Gk15Result<F> gk15(F&& f, double a, double b) {
  using Value = std::invoke_result_t<F, double>;
  const double centr = 0.5 * (a + b);
  const double hlgth = 0.5 * (b - a);

  Value fv1[7], fv2[7];
  const Value fc = f(centr);
  Value resg = fc * kWg[3];
  Value resk = fc * kWgk[7];
  double resabs = magnitude(resk);

  for (int j = 0; j < 3; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    fv1[jtw] = f(centr - absc);
    fv2[jtw] = f(centr + absc);
    const Value fsum = fv1[jtw] + fv2[jtw];
    resg = resg + fsum * kWg[j];
    resk = resk + fsum * kWgk[jtw];
    resabs += kWgk[jtw] * (magnitude(fv1[jtw]) + magnitude(fv2[jtw]));
  }
  for (int j = 0; j < 4; ++j) {
    const int jtwm1 = 2 * j;
    if (jtwm1 == 7) break;
    const double absc = hlgth * kXgk[jtwm1];
    fv1[jtwm1] = f(centr - absc);
    fv2[jtwm1] = f(centr + absc);
    const Value fsum = fv1[jtwm1] + fv2[jtwm1];
    resk = resk + fsum * kWgk[jtwm1];
    resabs += kWgk[jtwm1] * (magnitude(fv1[jtwm1]) + magnitude(fv2[jtwm1]));
  }

  const Value reskh = resk * 0.5;
  double resasc = kWgk[7] * magnitude(fc - reskh);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (magnitude(fv1[j] - reskh) + magnitude(fv2[j] - reskh));

  resabs *= std::abs(hlgth);
  resasc *= std::abs(hlgth);
  double abserr = magnitude((resk - resg) * hlgth);
  if (resasc != 0.0 && abserr != 0.0)
    abserr = resasc * std::min(1.0, std::pow(200.0 * abserr / resasc, 1.5));
  const double eps = std::numeric_limits<double>::epsilon();
  const double uflow = std::numeric_limits<double>::min();
  if (resabs > uflow / (50.0 * eps))
    abserr = std::max(eps * 50.0 * resabs, abserr);

  return {resk * hlgth, abserr};
}

}  // namespace detail

// Integrates f over [a, b].  Throws QuadratureError if the subdivision
// budget is exhausted before the requested tolerance is met.
template <class F>
auto integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  using Value = std::invoke_result_t<F, double>;
  struct Segment {
    double a, b, error;
    Value integral;
    bool operator<(const Segment& o) const { return error < o.error; }
  };

  auto first = detail::gk15(f, a, b);
  std::priority_queue<Segment> queue;
  queue.push({a, b, first.error, first.integral});
  Value total = first.integral;
  double total_err = first.error;
  // Width floor is local to a segment so subdivision can keep chasing an
  // endpoint singularity at x = 0 down to denormal scale.
  auto min_width = [](const Segment& s) {
    return std::numeric_limits<double>::epsilon() * 4.0 * (std::abs(s.a) + std::abs(s.b)) +
           1e-300;
  };

  int splits = 0;
  // Segments too narrow to split further are parked here.
  std::vector<Segment> frozen;
  while (total_err > std::max(spec.abs_tol, spec.rel_tol * detail::magnitude(total))) {
    if (queue.empty() || splits >= spec.max_subdivisions) {
      double wa = a, wb = b;
      if (!queue.empty()) {
        wa = queue.top().a;
        wb = queue.top().b;
      }
      std::ostringstream msg;
      msg << "quadrature did not converge: error " << total_err << " after " << splits
          << " subdivisions, worst interval [" << wa << ", " << wb << "]";
      throw QuadratureError(msg.str(), total_err, wa, wb);
    }
    Segment worst = queue.top();
    queue.pop();
    if (worst.b - worst.a < min_width(worst)) {
      frozen.push_back(worst);
      // Every remaining segment is unsplittable: accept the current sum.
      if (queue.empty()) break;
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15(f, worst.a, mid);
    auto right = detail::gk15(f, mid, worst.b);
    total = total - worst.integral + left.integral + right.integral;
    total_err = total_err - worst.error + left.error + right.error;
    queue.push({worst.a, mid, left.error, left.integral});
    queue.push({mid, worst.b, right.error, right.integral});
    ++splits;
  }
  return total;
}

// Truncation point L for integrands bounded by l^poly_power * exp(-decay*l):
// solves poly_power*ln(L) - decay*L = ln(tol) by bisection on the decaying
// branch.  The returned L makes the discarded tail bound fall below tol.
inline double exp_tail_truncation(double poly_power, double decay, double tol,
                                  double slack_efolds = 5.0) {
  if (decay <= 0.0) throw std::invalid_argument("tail truncation requires decay > 0");
  if (tol <= 0.0) throw std::invalid_argument("tail truncation requires tol > 0");
  const double target = std::log(tol) - slack_efolds;
  auto lhs = [&](double L) { return poly_power * std::log(L) - decay * L; };
  // Start right of the maximum of lhs so the function is decreasing.
  double lo = std::max(1.0, poly_power / decay + 1.0);
  if (lhs(lo) <= target) return lo;
  double hi = lo;
  while (lhs(hi) > target) hi *= 2.0;
  for (int i = 0; i < 200 && (hi - lo) > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (lhs(mid) > target ? lo : hi) = mid;
  }
  return hi;
}

// Integrates f over [a, inf) given that |f| decays at least like
// l^poly_power * exp(-decay*l).  The tail beyond the computed truncation
// point is bounded analytically and dropped.
template <class F>
auto integrate_decaying(F&& f, double a, double poly_power, double decay,
                        const QuadratureSpec& spec = {}) {
  const double L =
      exp_tail_truncation(poly_power, decay, std::min(spec.abs_tol, 1e-12), spec.tail_slack);
  return integrate(f, a, std::max(L, a + 1.0), spec);
}

}  // namespace areadist
