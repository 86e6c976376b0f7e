#ifndef QTORUS_QUANTUM_TORUS_HPP
#define QTORUS_QUANTUM_TORUS_HPP

#include <array>
#include <compare>
#include <map>
#include <string>
#include <utility>

#include <json.hpp>

#include "qtorus/eps_scalar.hpp"
#include "qtorus/report.hpp"

namespace qtorus {

/// E(n, m) = q^{n z} e^{m d_z}. Then U = E(0, 1), V = E(1, 0) and UV = qVU.
struct TorusWord {
  int n = 0;
  int m = 0;
  friend auto operator<=>(const TorusWord&, const TorusWord&) = default;
};

class TorusElement {
 public:
  explicit TorusElement(int cap = EpsScalar::kUnbounded) : cap_(cap) {}
  static TorusElement word(int n, int m, const EpsScalar& c, int cap);

  int cap() const { return cap_; }
  const std::map<TorusWord, EpsScalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  EpsScalar coeff(int n, int m) const;

  void add(const TorusWord& w, const EpsScalar& c);
  TorusElement& operator+=(const TorusElement& o);
  TorusElement& operator-=(const TorusElement& o);
  friend TorusElement operator+(TorusElement a, const TorusElement& b) { return a += b; }
  friend TorusElement operator-(TorusElement a, const TorusElement& b) { return a -= b; }
  friend TorusElement operator*(const EpsScalar& c, const TorusElement& x);
  friend bool operator==(const TorusElement& a, const TorusElement& b) { return a.terms_ == b.terms_; }

  std::string str() const;

 private:
  std::map<TorusWord, EpsScalar> terms_;
  int cap_;
};

/// E(n,m) E(l,k) = q^{ml} E(n+l, m+k).
TorusElement torus_mul(const TorusElement& x, const TorusElement& y);
TorusElement torus_bracket(const TorusElement& x, const TorusElement& y);

/// Normalized generator v^(k)_m = q^{-km/2} U^m V^k = q^{km/2} E(k, m).
TorusElement normalized_generator(int k, int m, int cap);

/// [E(n,m), E(l,k)] = (q^{ml} - q^{nk}) E(n+l, m+k).
Report bracket_formula_check(int n, int m, int l, int k, int cap);

/// [v^(k)_m, v^(l)_n] = (q^{(lm-kn)/2} - q^{-(lm-kn)/2}) v^(k+l)_{m+n}.
Report normalized_bracket_check(int m, int k, int n, int l, int cap);

/// Normal-ordered Weyl polynomial: (z-exponent, d-exponent) -> coefficient.
using WeylTable = std::map<std::pair<int, int>, Rational>;

/// z^s d^p * z^b d^a brought to normal order with d z = z d + 1.
WeylTable weyl_product(int s, int p, int b, int a);
/// [z^s d^p, z^b d^a] keyed by (z-exponent, d-exponent).
WeylTable weyl_commutator(int s, int p, int b, int a);
nlohmann::ordered_json weyl_table_json(const WeylTable& t);

/// Structure constants of the additional flows:
/// [d_{t_{p,s}}, d_{t_{a,b}}] = sum C_{alpha beta} d_{t_{alpha,beta}}, with t_{p,s}
/// the flow of M^p L^s. C_{alpha beta} is read off [z^s d^p, z^b d^a] at z^beta d^alpha.
std::map<std::pair<int, int>, Rational> w_structure_constants(int p, int s, int a, int b);

/// Which Weyl monomial carries the weight n^p (m eps)^s in the identity
/// sum_{psab} n^p (m eps)^s l^a (k eps)^b / (p! s! a! b!) C_{alpha beta} =
///   (q^{ml} - q^{nk}) (n+l)^alpha ((m+k) eps)^beta / (alpha! beta!).
enum class CombinaPairing {
  kZPowerFirst,  // z^p d^s, coefficient read at z^alpha d^beta
  kAsDisplayed,  // z^s d^p, coefficient read at z^beta d^alpha
};

/// Polynomial in the commuting formal variables (n, m, l, k, eps) with
/// rational coefficients, truncated above eps^cap.
class FormalPoly {
 public:
  using Exponents = std::array<int, 5>;
  static constexpr int kN = 0, kM = 1, kL = 2, kK = 3, kEps = 4;

  explicit FormalPoly(int cap) : cap_(cap) {}
  static FormalPoly constant(const Rational& c, int cap);
  static FormalPoly var(int which, int cap);

  int cap() const { return cap_; }
  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  FormalPoly& operator+=(const FormalPoly& o);
  FormalPoly& operator-=(const FormalPoly& o);
  friend FormalPoly operator+(FormalPoly a, const FormalPoly& b) { return a += b; }
  friend FormalPoly operator-(FormalPoly a, const FormalPoly& b) { return a -= b; }
  friend FormalPoly operator*(const FormalPoly& a, const FormalPoly& b);
  friend FormalPoly operator*(const Rational& c, FormalPoly a);
  friend bool operator==(const FormalPoly& a, const FormalPoly& b) { return a.terms_ == b.terms_; }

  std::string str() const;

 private:
  std::map<Exponents, Rational> terms_;
  int cap_;
};

FormalPoly formal_pow(const FormalPoly& x, int e);
/// exp(x * eps) truncated at eps^cap.
FormalPoly formal_q_power(const FormalPoly& x, int cap);

FormalPoly combina_lhs(int alpha, int beta, int cap, CombinaPairing pairing);
FormalPoly combina_rhs(int alpha, int beta, int cap);
Report verify_combina(int alpha, int beta, int cap, CombinaPairing pairing = CombinaPairing::kZPowerFirst);

/// l^p (k eps)^s / (p! s! (p+1)) for p <= P, s <= cap; zero entries omitted.
std::map<std::pair<int, int>, EpsScalar> resum_coefficients(int l, int k, int P, int cap);

}  // namespace qtorus

#endif  // QTORUS_QUANTUM_TORUS_HPP
