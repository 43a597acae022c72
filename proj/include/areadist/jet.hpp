#pragma once
// Truncated power series ("jets") in one variable g about g = 0, with
// coefficients in an extended-precision real type.  High-order derivatives
// at zero come out of these series exactly, which is what the moment
// formulas consume; double precision loses every digit well before the
// orders needed here.
//
// Precision is run-time state: wrap work in a PrecisionScope and construct
// all values inside it.  Composition uses the standard O(N^2) power-series
// recurrences.

#include <boost/multiprecision/mpfr.hpp>

#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace areadist {

using BigFloat = boost::multiprecision::mpfr_float;

struct PrecisionConfig {
  unsigned significand_bits = 256;
  unsigned default_order = 64;
};

inline void validate(const PrecisionConfig& cfg) {
  if (cfg.significand_bits < 64)
    throw std::invalid_argument("precision must be at least 64 significand bits");
  if (cfg.default_order < 2)
    throw std::invalid_argument("truncation order must be at least 2");
}

// Decimal digits covering the requested binary significand.
inline unsigned digits10_for_bits(unsigned bits) {
  return static_cast<unsigned>((static_cast<unsigned long long>(bits) * 30103 + 99999) /
                               100000);
}

// Sets the thread's default BigFloat precision for the lifetime of the
// scope.  Values must be constructed inside the scope to pick it up.
class PrecisionScope {
 public:
  explicit PrecisionScope(unsigned significand_bits)
      : saved_digits_(BigFloat::default_precision()) {
    if (significand_bits < 64)
      throw std::invalid_argument("precision must be at least 64 significand bits");
    BigFloat::default_precision(digits10_for_bits(significand_bits));
  }
  ~PrecisionScope() { BigFloat::default_precision(saved_digits_); }
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  unsigned saved_digits_;
};

inline BigFloat big_pi() {
  BigFloat x;
  mpfr_const_pi(x.backend().data(), MPFR_RNDN);
  return x;
}

inline BigFloat big_ln2() {
  BigFloat x;
  mpfr_const_log2(x.backend().data(), MPFR_RNDN);
  return x;
}

struct SingularJetError : std::domain_error {
  using std::domain_error::domain_error;
};

struct JetOrderError : std::invalid_argument {
  std::size_t required;
  JetOrderError(const std::string& msg, std::size_t required_order)
      : std::invalid_argument(msg), required(required_order) {}
};

class Jet {
 public:
  explicit Jet(std::size_t order) : c_(order + 1, BigFloat(0)) {}

  static Jet constant(const BigFloat& value, std::size_t order) {
    Jet j(order);
    j.c_[0] = value;
    return j;
  }

  // The series of g itself.
  static Jet variable(std::size_t order) {
    if (order < 1) throw JetOrderError("variable jet needs order >= 1", 1);
    Jet j(order);
    j.c_[1] = 1;
    return j;
  }

  std::size_t order() const { return c_.size() - 1; }
  const BigFloat& operator[](std::size_t i) const { return c_.at(i); }
  BigFloat& operator[](std::size_t i) { return c_.at(i); }
  const std::vector<BigFloat>& coefficients() const { return c_; }

  Jet truncated(std::size_t new_order) const {
    Jet out(new_order);
    for (std::size_t i = 0; i <= new_order && i < c_.size(); ++i) out.c_[i] = c_[i];
    return out;
  }

 private:
  std::vector<BigFloat> c_;
};

namespace detail {
inline void require_same_order(const Jet& a, const Jet& b) {
  if (a.order() != b.order()) {
    std::ostringstream msg;
    msg << "jet orders differ: " << a.order() << " vs " << b.order();
    throw JetOrderError(msg.str(), std::max(a.order(), b.order()));
  }
}
}  // namespace detail

inline Jet operator+(const Jet& a, const Jet& b) {
  detail::require_same_order(a, b);
  Jet out(a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) out[i] = a[i] + b[i];
  return out;
}

inline Jet operator-(const Jet& a, const Jet& b) {
  detail::require_same_order(a, b);
  Jet out(a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) out[i] = a[i] - b[i];
  return out;
}

inline Jet operator-(const Jet& a) {
  Jet out(a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) out[i] = -a[i];
  return out;
}

inline Jet operator*(const Jet& a, const BigFloat& s) {
  Jet out(a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) out[i] = a[i] * s;
  return out;
}
inline Jet operator*(const BigFloat& s, const Jet& a) { return a * s; }

inline Jet operator*(const Jet& a, const Jet& b) {
  detail::require_same_order(a, b);
  const std::size_t n = a.order();
  Jet out(n);
  for (std::size_t i = 0; i <= n; ++i) {
    BigFloat acc(0);
    for (std::size_t j = 0; j <= i; ++j) acc += a[j] * b[i - j];
    out[i] = acc;
  }
  return out;
}

inline Jet operator/(const Jet& a, const Jet& b) {
  detail::require_same_order(a, b);
  if (b[0] == 0)
    throw SingularJetError("jet division by series with zero constant term");
  const std::size_t n = a.order();
  Jet out(n);
  for (std::size_t i = 0; i <= n; ++i) {
    BigFloat acc = a[i];
    for (std::size_t j = 0; j < i; ++j) acc -= out[j] * b[i - j];
    out[i] = acc / b[0];
  }
  return out;
}

inline Jet jet_sqrt(const Jet& a) {
  if (!(a[0] > 0)) throw SingularJetError("jet sqrt needs a positive constant term");
  const std::size_t n = a.order();
  Jet out(n);
  out[0] = sqrt(a[0]);
  const BigFloat two_b0 = 2 * out[0];
  for (std::size_t i = 1; i <= n; ++i) {
    BigFloat acc = a[i];
    for (std::size_t j = 1; j < i; ++j) acc -= out[j] * out[i - j];
    out[i] = acc / two_b0;
  }
  return out;
}

inline Jet jet_exp(const Jet& a) {
  const std::size_t n = a.order();
  Jet out(n);
  out[0] = exp(a[0]);
  for (std::size_t i = 1; i <= n; ++i) {
    BigFloat acc(0);
    for (std::size_t j = 1; j <= i; ++j) acc += BigFloat(j) * a[j] * out[i - j];
    out[i] = acc / i;
  }
  return out;
}

inline Jet jet_log(const Jet& a) {
  if (!(a[0] > 0)) throw SingularJetError("jet log needs a positive constant term");
  const std::size_t n = a.order();
  Jet out(n);
  out[0] = log(a[0]);
  for (std::size_t i = 1; i <= n; ++i) {
    BigFloat acc = BigFloat(i) * a[i];
    for (std::size_t j = 1; j < i; ++j) acc -= BigFloat(j) * out[j] * a[i - j];
    out[i] = acc / (BigFloat(i) * a[0]);
  }
  return out;
}

// a^alpha for a real exponent; the binomial-series generalization.
inline Jet jet_pow(const Jet& a, const BigFloat& alpha) {
  if (!(a[0] > 0)) throw SingularJetError("jet pow needs a positive constant term");
  const std::size_t n = a.order();
  Jet out(n);
  out[0] = pow(a[0], alpha);
  for (std::size_t i = 1; i <= n; ++i) {
    BigFloat acc(0);
    for (std::size_t j = 1; j <= i; ++j) acc += alpha * BigFloat(j) * a[j] * out[i - j];
    for (std::size_t j = 1; j < i; ++j) acc -= BigFloat(j) * out[j] * a[i - j];
    out[i] = acc / (BigFloat(i) * a[0]);
  }
  return out;
}

// sin and cos advance together through the coupled recurrence.
inline std::pair<Jet, Jet> jet_sin_cos(const Jet& a) {
  const std::size_t n = a.order();
  Jet s(n), c(n);
  s[0] = sin(a[0]);
  c[0] = cos(a[0]);
  for (std::size_t i = 1; i <= n; ++i) {
    BigFloat accs(0), accc(0);
    for (std::size_t j = 1; j <= i; ++j) {
      accs += BigFloat(j) * a[j] * c[i - j];
      accc += BigFloat(j) * a[j] * s[i - j];
    }
    s[i] = accs / i;
    c[i] = -accc / i;
  }
  return {s, c};
}

inline Jet jet_sin(const Jet& a) { return jet_sin_cos(a).first; }
inline Jet jet_cos(const Jet& a) { return jet_sin_cos(a).second; }

// Term-by-term derivative; drops one order.
inline Jet jet_derivative(const Jet& a) {
  if (a.order() < 1) throw JetOrderError("derivative needs order >= 1", 1);
  Jet out(a.order() - 1);
  for (std::size_t i = 0; i + 1 <= a.order(); ++i) out[i] = BigFloat(i + 1) * a[i + 1];
  return out;
}

// Term-by-term antiderivative with the given constant; gains one order.
inline Jet jet_antiderivative(const Jet& a, const BigFloat& constant_term) {
  Jet out(a.order() + 1);
  out[0] = constant_term;
  for (std::size_t i = 0; i <= a.order(); ++i) out[i + 1] = a[i] / BigFloat(i + 1);
  return out;
}

inline Jet jet_asin(const Jet& a) {
  if (!(abs(a[0]) < 1))
    throw SingularJetError("jet arcsin needs |constant term| < 1");
  const std::size_t n = a.order();
  if (n < 1) throw JetOrderError("arcsin needs order >= 1", 1);
  const Jet u = jet_sqrt(Jet::constant(1, n) - a * a).truncated(n - 1);
  const Jet q = jet_derivative(a) / u;
  return jet_antiderivative(q, asin(a[0]));
}

// a/g for a series with zero constant term; shifts coefficients down one.
inline Jet odd_quotient(const Jet& a) {
  if (!(a[0] == 0))
    throw SingularJetError("quotient by g needs a zero constant term");
  if (a.order() < 1) throw JetOrderError("quotient by g needs order >= 1", 1);
  Jet out(a.order() - 1);
  for (std::size_t i = 1; i <= a.order(); ++i) out[i - 1] = a[i];
  return out;
}

// n-th derivative at g = 0, i.e. n! times the n-th coefficient.
inline BigFloat derivative_at_zero(const Jet& a, std::size_t n) {
  if (n > a.order()) {
    std::ostringstream msg;
    msg << "derivative order " << n << " exceeds truncation order " << a.order();
    throw JetOrderError(msg.str(), n);
  }
  BigFloat factorial(1);
  for (std::size_t i = 2; i <= n; ++i) factorial *= i;
  return factorial * a[n];
}

}  // namespace areadist
