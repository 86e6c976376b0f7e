#include "qtorus/eps_scalar.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qtorus {

Rational binomial(const Rational& n, int k) {
  if (k < 0) return Rational(0);
  Rational m = n;
  m.canonicalize();
  Rational r(1);
  for (int i = 0; i < k; ++i) {
    r *= (m - i);
    r /= (i + 1);
  }
  return r;
}

Rational factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial of a negative integer");
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

EpsScalar::EpsScalar(const Rational& r) {
  if (sgn(r) != 0) {
    coeffs_.push_back(r);
    coeffs_.back().canonicalize();
  }
}

EpsScalar::EpsScalar(long v) {
  if (v != 0) coeffs_.emplace_back(v);
}

EpsScalar::EpsScalar(std::vector<Rational> coeffs, int cap) : coeffs_(std::move(coeffs)), cap_(cap) {
  if (cap_ < 0) throw std::invalid_argument("eps cap must be non-negative");
  for (auto& c : coeffs_) c.canonicalize();
  trim();
}

EpsScalar EpsScalar::monomial(const Rational& c, int degree, int cap) {
  if (degree > cap || sgn(c) == 0) return EpsScalar(std::vector<Rational>{}, cap);
  std::vector<Rational> v(degree + 1);
  v[degree] = c;
  return EpsScalar(std::move(v), cap);
}

Rational EpsScalar::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(coeffs_.size())) return Rational(0);
  return coeffs_[i];
}

EpsScalar EpsScalar::with_cap(int cap) const {
  EpsScalar r = *this;
  r.cap_ = std::min(cap_, cap);
  r.trim();
  return r;
}

void EpsScalar::trim() {
  if (cap_ != kUnbounded && static_cast<int>(coeffs_.size()) > cap_ + 1) coeffs_.resize(cap_ + 1);
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
}

EpsScalar EpsScalar::operator-() const {
  EpsScalar r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

EpsScalar& EpsScalar::operator+=(const EpsScalar& o) {
  cap_ = std::min(cap_, o.cap_);
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
  trim();
  return *this;
}

EpsScalar& EpsScalar::operator-=(const EpsScalar& o) {
  cap_ = std::min(cap_, o.cap_);
  if (coeffs_.size() < o.coeffs_.size()) coeffs_.resize(o.coeffs_.size());
  for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
  trim();
  return *this;
}

EpsScalar& EpsScalar::operator*=(const EpsScalar& o) {
  cap_ = std::min(cap_, o.cap_);
  if (coeffs_.empty()) return *this;
  if (o.coeffs_.empty()) {
    coeffs_.clear();
    return *this;
  }
  if (coeffs_.size() == 1 && o.coeffs_.size() == 1) {
    coeffs_[0] *= o.coeffs_[0];
    return *this;
  }
  std::size_t n = coeffs_.size() + o.coeffs_.size() - 1;
  if (cap_ != kUnbounded) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap_) + 1);
  std::vector<Rational> out(n);
  for (std::size_t i = 0; i < coeffs_.size() && i < n; ++i) {
    for (std::size_t j = 0; j < o.coeffs_.size() && i + j < n; ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
  }
  coeffs_ = std::move(out);
  trim();
  return *this;
}

bool operator==(const EpsScalar& a, const EpsScalar& b) {
  int cap = std::min(a.cap_, b.cap_);
  int n = std::max(a.degree(), b.degree());
  if (cap != EpsScalar::kUnbounded) n = std::min(n, cap);
  for (int i = 0; i <= n; ++i) {
    if (a.coeff(i) != b.coeff(i)) return false;
  }
  return true;
}

std::string EpsScalar::str() const {
  if (coeffs_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Rational& c = coeffs_[i];
    if (sgn(c) == 0) continue;
    bool neg = sgn(c) < 0;
    Rational mag = abs(c);
    if (!first) os << (neg ? " - " : " + ");
    else if (neg) os << "-";
    first = false;
    if (i == 0) {
      os << mag.get_str();
    } else {
      if (mag != 1) os << mag.get_str() << "*";
      os << "eps";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

EpsScalar eps_q_power(const Rational& a, int cap) {
  if (cap < 0) throw std::invalid_argument("eps cap must be non-negative");
  Rational x = a;
  x.canonicalize();
  std::vector<Rational> v(cap + 1);
  Rational term(1);
  for (int s = 0; s <= cap; ++s) {
    v[s] = term;
    term *= x;
    term /= (s + 1);
  }
  return EpsScalar(std::move(v), cap);
}

}  // namespace qtorus
