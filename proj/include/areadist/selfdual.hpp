#pragma once
// Decomposition of antisymmetric rank-2 tensors over Minkowski space
// (signature -+++) into the two complex 3-vector sectors attached to the
// (anti-)self-dual generator basis, plus the bilinear invariants that the
// sector squares reproduce.
//
// Index conventions: tensors are stored with both indices up, edges as
// 4-vectors with component 0 the time direction, eps3(1,2,3) = +1 and the
// 4-index symbol has eps4_upper(0,1,2,3) = +1.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <stdexcept>

namespace areadist {

using Complex = std::complex<double>;
using Edge4 = Eigen::Vector4d;

inline const Eigen::Matrix4d& minkowski_metric() {
  static const Eigen::Matrix4d g = [] {
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m(0, 0) = -1.0;
    return m;
  }();
  return g;
}

inline double minkowski_dot(const Edge4& a, const Edge4& b) {
  return -a(0) * b(0) + a(1) * b(1) + a(2) * b(2) + a(3) * b(3);
}

inline int eps3(int i, int j, int k) {
  // 1-based spatial indices.
  return (i - j) * (j - k) * (k - i) / 2;
}

// Permutation sign of (a,b,c,d) as the all-upper symbol; 0-based indices.
inline int eps4_upper(int a, int b, int c, int d) {
  const int p[4] = {a, b, c, d};
  int sign = 1;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      if (p[i] == p[j]) return 0;
      if (p[i] > p[j]) sign = -sign;
    }
  return sign;
}

// Antisymmetric rank-2 tensor with both indices up.
class AreaTensor4 {
 public:
  explicit AreaTensor4(const Eigen::Matrix4d& components) : m_(components) {
    const double scale = m_.cwiseAbs().maxCoeff() + 1.0;
    if (((m_ + m_.transpose()).cwiseAbs().maxCoeff()) > 1e-12 * scale)
      throw std::invalid_argument("area tensor components must be antisymmetric");
  }

  double operator()(int a, int b) const { return m_(a, b); }
  const Eigen::Matrix4d& components() const { return m_; }

 private:
  Eigen::Matrix4d m_;
};

// The pair of sector 3-vectors (complex conjugates for a real tensor).
struct AreaVector {
  Eigen::Vector3cd plus;
  Eigen::Vector3cd minus;
};

// Complex square of a sector vector, no conjugation.
inline Complex sector_square(const Eigen::Vector3cd& v) {
  return v(0) * v(0) + v(1) * v(1) + v(2) * v(2);
}

// Generator basis: rotation part E_k, boost part L_k, and the two sector
// combinations E_k +- i L_k, all stored with both indices down.
struct SigmaBasis {
  std::array<Eigen::Matrix4d, 3> rotation;
  std::array<Eigen::Matrix4d, 3> boost;
  std::array<Eigen::Matrix4cd, 3> plus;
  std::array<Eigen::Matrix4cd, 3> minus;
};

inline SigmaBasis sigma_basis() {
  SigmaBasis basis;
  const Complex i_unit(0.0, 1.0);
  for (int k = 1; k <= 3; ++k) {
    Eigen::Matrix4d E = Eigen::Matrix4d::Zero();
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b) E(a, b) = -eps3(k, a, b);
    Eigen::Matrix4d L = Eigen::Matrix4d::Zero();
    L(k, 0) = -1.0;
    L(0, k) = 1.0;
    basis.rotation[k - 1] = E;
    basis.boost[k - 1] = L;
    basis.plus[k - 1] = E.cast<Complex>() + i_unit * L.cast<Complex>();
    basis.minus[k - 1] = E.cast<Complex>() - i_unit * L.cast<Complex>();
  }
  return basis;
}

// Sector 3-vectors of an area tensor: twice the sector vector collects the
// spatial curl part and the time-space column.
inline AreaVector selfdual_decompose(const AreaTensor4& v) {
  AreaVector w;
  for (int k = 1; k <= 3; ++k) {
    double curl = 0.0;
    for (int l = 1; l <= 3; ++l)
      for (int m = 1; m <= 3; ++m) curl += eps3(k, l, m) * v(l, m);
    const double spatial = -0.5 * curl;
    const double timespace = v(0, k);
    w.plus(k - 1) = Complex(spatial, timespace);
    w.minus(k - 1) = Complex(spatial, -timespace);
  }
  return w;
}

// Inverse of selfdual_decompose.  The imaginary parts cancel only when the
// sector vectors form a conjugate pair; anything else is flagged.
inline AreaTensor4 reconstruct(const AreaVector& w, const SigmaBasis& basis) {
  Eigen::Matrix4cd lower = Eigen::Matrix4cd::Zero();
  for (int k = 0; k < 3; ++k)
    lower += 0.5 * (w.plus(k) * basis.plus[k] + w.minus(k) * basis.minus[k]);
  const Eigen::Matrix4cd upper =
      minkowski_metric().cast<Complex>() * lower * minkowski_metric().cast<Complex>();
  const double scale = upper.cwiseAbs().maxCoeff() + 1.0;
  if (upper.imag().cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::domain_error(
        "sector vectors are not a conjugate pair: reconstruction is not real");
  return AreaTensor4(upper.real());
}

inline AreaTensor4 reconstruct(const AreaVector& w) { return reconstruct(w, sigma_basis()); }

struct PairingInvariants {
  double circ;  // (1/2) v_ab v^ab
  double star;  // (1/4) eps_abcd v^ab v^cd
};

inline PairingInvariants pairing_invariants(const AreaTensor4& v) {
  const Eigen::Matrix4d& g = minkowski_metric();
  const Eigen::Matrix4d lower = g * v.components() * g;
  double circ = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) circ += lower(a, b) * v(a, b);
  circ *= 0.5;

  // eps_abcd (all indices down) = det(g) * eps4_upper = -eps4_upper.
  double star = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      if (a == b) continue;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const int sign = eps4_upper(a, b, c, d);
          if (sign) star += -sign * v(a, b) * v(c, d);
        }
    }
  star *= 0.25;
  return {circ, star};
}

// Area tensor dual to the simplex face spanned by two edges:
// v^ab = (1/2) eps^ab_cd l1^c l2^d.
inline AreaTensor4 area_tensor_from_edges(const Edge4& l1, const Edge4& l2) {
  const Eigen::Matrix4d& g = minkowski_metric();
  Eigen::Matrix4d upper = Eigen::Matrix4d::Zero();
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double acc = 0.0;
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          // eps^ab_cd = eps^abef g_ec g_fd; the metric is diagonal.
          const int sign = eps4_upper(a, b, c, d);
          if (sign) acc += sign * g(c, c) * g(d, d) * l1(c) * l2(d);
        }
      upper(a, b) = 0.5 * acc;
    }
  return AreaTensor4(upper);
}

// Sector vectors of that dual tensor, written directly in terms of the
// edges: 2 (+-v) = +-i l1 x l2 - l1 l2^0 + l2 l1^0 on the spatial parts.
inline AreaVector bivector_from_edges(const Edge4& l1, const Edge4& l2) {
  const Eigen::Vector3d s1 = l1.tail<3>();
  const Eigen::Vector3d s2 = l2.tail<3>();
  const Eigen::Vector3d cross = s1.cross(s2);
  const Eigen::Vector3d real_part = -s1 * l2(0) + s2 * l1(0);
  AreaVector w;
  for (int k = 0; k < 3; ++k) {
    w.plus(k) = 0.5 * Complex(real_part(k), cross(k));
    w.minus(k) = 0.5 * Complex(real_part(k), -cross(k));
  }
  return w;
}

}  // namespace areadist
