#ifndef QTORUS_EPS_SCALAR_HPP
#define QTORUS_EPS_SCALAR_HPP

#include <gmpxx.h>

#include <climits>
#include <string>
#include <vector>

namespace qtorus {

/// Exact arbitrary-precision rational; always kept in lowest terms with a
/// positive denominator.
using Rational = mpq_class;

Rational binomial(const Rational& n, int k);
Rational factorial(int n);

/// Truncated polynomial in the nilpotent parameter eps = log q.
///
/// A value with cap D is known modulo eps^(D+1). Values built from plain
/// rationals carry kUnbounded and never truncate on their own; binary
/// operations take the smaller of the two caps.
class EpsScalar {
 public:
  static constexpr int kUnbounded = INT_MAX;

  EpsScalar() = default;
  EpsScalar(const Rational& r);  // NOLINT(google-explicit-constructor)
  EpsScalar(long v);             // NOLINT(google-explicit-constructor)
  EpsScalar(int v) : EpsScalar(static_cast<long>(v)) {}  // NOLINT
  EpsScalar(std::vector<Rational> coeffs, int cap);

  /// eps^degree with the given cap (zero if degree > cap).
  static EpsScalar monomial(const Rational& c, int degree, int cap);

  int cap() const { return cap_; }
  /// Highest stored eps-degree, -1 for zero.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_rational() const { return coeffs_.size() <= 1; }
  Rational coeff(int i) const;
  const std::vector<Rational>& coeffs() const { return coeffs_; }

  EpsScalar with_cap(int cap) const;

  EpsScalar operator-() const;
  EpsScalar& operator+=(const EpsScalar& o);
  EpsScalar& operator-=(const EpsScalar& o);
  EpsScalar& operator*=(const EpsScalar& o);
  friend EpsScalar operator+(EpsScalar a, const EpsScalar& b) { return a += b; }
  friend EpsScalar operator-(EpsScalar a, const EpsScalar& b) { return a -= b; }
  friend EpsScalar operator*(EpsScalar a, const EpsScalar& b) { return a *= b; }

  /// Equality of the known parts (compared up to the smaller cap).
  friend bool operator==(const EpsScalar& a, const EpsScalar& b);

  std::string str() const;

 private:
  void trim();

  std::vector<Rational> coeffs_;
  int cap_ = kUnbounded;
};

/// q^a = exp(a eps) truncated at eps^cap.
EpsScalar eps_q_power(const Rational& a, int cap);

}  // namespace qtorus

#endif  // QTORUS_EPS_SCALAR_HPP
