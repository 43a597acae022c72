#pragma once
// Configuration-measure machinery for triads of area vectors: Gram
// determinants, the |det|^{3/2} and |det|^{9/2} weights, edge-vector
// reconstruction, the scaling identities behind the delta-factor
// invariance, and the flattening integrability scan.
//
// Real time-gauge convention: edges are purely spatial and the triad is the
// real form v_a = (1/2) eps_a^{bc} l_b x l_c, with the epsilon sum taken over
// b < c (one term per a).  The double-counting alternative fails the round
// trip by a factor 2.

#include "areadist/fitting.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <vector>

namespace areadist {

struct Triad {
  Eigen::Vector3d v1, v2, v3;
};

struct TriadGram {
  Eigen::Matrix3d gram;
  double det;
};

struct EdgeTriple {
  Eigen::Vector3d l1, l2, l3;
};

enum class MeasureExponent { three_halves, nine_halves };

inline TriadGram triad_gram(const Triad& t) {
  Eigen::Matrix3d m;
  m << t.v1, t.v2, t.v3;  // columns
  TriadGram out;
  out.gram = m.transpose() * m;
  out.det = out.gram.determinant();
  return out;
}

inline double measure_weight(const Triad& t, MeasureExponent exponent) {
  const double det = triad_gram(t).det;
  const double p = exponent == MeasureExponent::three_halves ? 1.5 : 4.5;
  return std::pow(std::abs(det), p);
}

namespace detail {

// Signed triple product; its square equals the Gram determinant exactly in
// real arithmetic and is the numerically stable route near degeneracy.
inline double triad_triple(const Triad& t) { return t.v1.cross(t.v2).dot(t.v3); }

}  // namespace detail

// l_a = sqrt(2) eps_a^{bc} v_b x v_c |det|^{-1/4}.  The quarter power is
// computed as sqrt(|triple product|): the Gram-determinant route loses all
// precision once det approaches the roundoff floor of the 3x3 determinant.
inline EdgeTriple edges_from_triad(const Triad& t) {
  const double triple = detail::triad_triple(t);
  if (triple == 0.0 || !std::isfinite(triple))
    throw std::domain_error("degenerate triad: coplanar area vectors");
  const double quarter_det = std::sqrt(std::abs(triple));
  const double scale = std::sqrt(2.0) / quarter_det;
  return {scale * t.v2.cross(t.v3), scale * t.v3.cross(t.v1),
          scale * t.v1.cross(t.v2)};
}

// Real time-gauge rebuild v_a = (1/2) eps_a^{bc} l_b x l_c.  Composing with
// edges_from_triad reproduces the source triad times sign(triple product).
inline Triad triad_from_edges(const EdgeTriple& e) {
  return {0.5 * e.l2.cross(e.l3), 0.5 * e.l3.cross(e.l1), 0.5 * e.l1.cross(e.l2)};
}

inline double edge_triple_volume(const EdgeTriple& e) {
  return e.l1.cross(e.l2).dot(e.l3);
}

// ---------------------------------------------------------------------------
// Delta-factor invariance under triad redefinition v_a -> A_a^b v_b.

struct DeltaScalingReport {
  double det_a;
  double gram_factor;       // det G(Av) / det G(v); expected (det A)^2
  double jacobian;          // determinant of X -> A X A^T on Sym(3); expected (det A)^4
  double invariance_ratio;  // gram_factor^2 / jacobian; expected 1
};

inline DeltaScalingReport delta_factor_scaling_check(const Eigen::Matrix3d& a,
                                                     const Triad& t) {
  const double det_a = a.determinant();
  const double scale = a.norm() / std::sqrt(3.0);
  if (!std::isfinite(det_a) || scale == 0.0 ||
      std::abs(det_a) < 1e-12 * scale * scale * scale)
    throw std::invalid_argument("triad redefinition matrix is singular");

  const double base_det = triad_gram(t).det;
  if (base_det == 0.0)
    throw std::domain_error("degenerate triad: coplanar area vectors");

  const Triad mixed{a(0, 0) * t.v1 + a(0, 1) * t.v2 + a(0, 2) * t.v3,
                    a(1, 0) * t.v1 + a(1, 1) * t.v2 + a(1, 2) * t.v3,
                    a(2, 0) * t.v1 + a(2, 1) * t.v2 + a(2, 2) * t.v3};

  DeltaScalingReport out;
  out.det_a = det_a;
  out.gram_factor = triad_gram(mixed).det / base_det;

  // Central finite differences of the symmetric-matrix map on the six
  // coordinates (X11, X22, X33, X12, X13, X23).  The map is linear, so the
  // step size only steers roundoff.
  const auto pack = [](const Eigen::Matrix3d& x) {
    Eigen::Matrix<double, 6, 1> c;
    c << x(0, 0), x(1, 1), x(2, 2), x(0, 1), x(0, 2), x(1, 2);
    return c;
  };
  const auto basis = [](int k) {
    Eigen::Matrix3d e = Eigen::Matrix3d::Zero();
    if (k < 3) {
      e(k, k) = 1.0;
    } else {
      const int i = k == 3 ? 0 : (k == 4 ? 0 : 1);
      const int j = k == 3 ? 1 : 2;
      e(i, j) = e(j, i) = 1.0;
    }
    return e;
  };
  const Eigen::Matrix3d x0 = triad_gram(t).gram;
  const double h = 1.0;
  Eigen::Matrix<double, 6, 6> jac;
  for (int k = 0; k < 6; ++k) {
    const Eigen::Matrix3d plus = a * (x0 + h * basis(k)) * a.transpose();
    const Eigen::Matrix3d minus = a * (x0 - h * basis(k)) * a.transpose();
    jac.col(k) = pack(plus - minus) / (2.0 * h);
  }
  out.jacobian = jac.determinant();
  out.invariance_ratio = out.gram_factor * out.gram_factor / out.jacobian;
  return out;
}

// ---------------------------------------------------------------------------
// Flattening integrability scan.

enum class Convergence { convergent, marginal, divergent };

struct LengthMomentScan {
  int n;
  double predicted_exponent;  // 9 - n/2
  double fitted_exponent;
  Convergence verdict;
  std::size_t sample_count;
  double eps_hi, eps_lo;
};

// Samples the weight |det|^{9/2} |l|^n over a one-parameter flattening
// family: v3 = c1 v1 + c2 v2 + eps * unit-normal, so det = eps^2 |v1 x v2|^2
// exactly and the edge norms blow up as eps^{-1/2}.  The log-weight is fitted
// against log eps over the requested decades; convergence of the eps
// integral needs exponent > -1.  Each decade draws from an independently
// seeded substream, so decade batches merge deterministically in any order.
inline LengthMomentScan length_moment_scan(int n, int decades = 4,
                                           int samples_per_decade = 4000,
                                           unsigned seed = 1u) {
  if (n < 0) throw std::invalid_argument("moment order must be nonnegative");
  if (decades < 2 || samples_per_decade < 8)
    throw std::invalid_argument("scan sampling too sparse to fit an exponent");

  const double eps_hi = 1e-4;
  std::vector<double> xs, ys;
  xs.reserve(static_cast<std::size_t>(decades) * samples_per_decade);
  ys.reserve(xs.capacity());

  for (int d = 0; d < decades; ++d) {
    std::mt19937 rng(seed + 0x9E3779B9u * static_cast<unsigned>(d + 1));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int s = 0; s < samples_per_decade; ++s) {
      Eigen::Vector3d v1, v2, plane;
      do {
        v1 = Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
        v2 = Eigen::Vector3d(unit(rng), unit(rng), unit(rng));
        plane = v1.cross(v2);
      } while (plane.norm() < 0.5);
      const double c1 = unit(rng);
      const double c2 = unit(rng);
      const double eps = eps_hi * std::pow(10.0, -(d + u01(rng)));

      const Triad t{v1, v2, c1 * v1 + c2 * v2 + eps * plane.normalized()};
      const double triple = detail::triad_triple(t);
      const EdgeTriple e = edges_from_triad(t);
      const double l_sq =
          e.l1.squaredNorm() + e.l2.squaredNorm() + e.l3.squaredNorm();
      // log of |det|^{9/2} |l|^n with det = triple^2; staying in logs keeps
      // large n clear of overflow.
      const double log_weight =
          9.0 * std::log(std::abs(triple)) + 0.5 * n * std::log(l_sq);
      xs.push_back(std::log(eps));
      ys.push_back(log_weight);
    }
  }

  const LinearFit fit = linear_fit(xs, ys);
  constexpr double kMargin = 0.02;

  LengthMomentScan out;
  out.n = n;
  out.predicted_exponent = 9.0 - 0.5 * n;
  out.fitted_exponent = fit.slope;
  out.verdict = fit.slope > -1.0 + kMargin
                    ? Convergence::convergent
                    : (fit.slope < -1.0 - kMargin ? Convergence::divergent
                                                  : Convergence::marginal);
  out.sample_count = xs.size();
  out.eps_hi = eps_hi;
  out.eps_lo = eps_hi * std::pow(10.0, -decades);
  return out;
}

}  // namespace areadist
