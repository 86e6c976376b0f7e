#include "qtorus/quantum_torus.hpp"

#include <sstream>

namespace qtorus {

namespace {

Rational falling(int b, int j) {
  Rational r = 1;
  for (int i = 0; i < j; ++i) r *= b - i;
  return r;
}

Rational int_pow(long base, int e) {
  mpz_class r;
  mpz_pow_ui(r.get_mpz_t(), mpz_class(base).get_mpz_t(), static_cast<unsigned long>(e));
  return Rational(r);
}

std::string torus_word_str(const TorusWord& w) { return "E(" + std::to_string(w.n) + "," + std::to_string(w.m) + ")"; }

}  // namespace

TorusElement TorusElement::word(int n, int m, const EpsScalar& c, int cap) {
  TorusElement x(cap);
  x.add({n, m}, c);
  return x;
}

EpsScalar TorusElement::coeff(int n, int m) const {
  auto it = terms_.find({n, m});
  return it == terms_.end() ? EpsScalar(0L) : it->second;
}

void TorusElement::add(const TorusWord& w, const EpsScalar& c) {
  EpsScalar v = (coeff(w.n, w.m) + c).with_cap(cap_);
  if (v.is_zero()) terms_.erase(w);
  else terms_[w] = std::move(v);
}

TorusElement& TorusElement::operator+=(const TorusElement& o) {
  cap_ = std::min(cap_, o.cap_);
  for (const auto& [w, c] : o.terms_) add(w, c);
  return *this;
}

TorusElement& TorusElement::operator-=(const TorusElement& o) {
  cap_ = std::min(cap_, o.cap_);
  for (const auto& [w, c] : o.terms_) add(w, -c);
  return *this;
}

TorusElement operator*(const EpsScalar& c, const TorusElement& x) {
  TorusElement r(std::min(x.cap_, c.cap()));
  for (const auto& [w, v] : x.terms_) r.add(w, c * v);
  return r;
}

std::string TorusElement::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << "(" << c.str() << ")*" << torus_word_str(w);
  }
  return out.str();
}

TorusElement torus_mul(const TorusElement& x, const TorusElement& y) {
  const int cap = std::min(x.cap(), y.cap());
  TorusElement r(cap);
  for (const auto& [w1, c1] : x.terms()) {
    for (const auto& [w2, c2] : y.terms()) {
      r.add({w1.n + w2.n, w1.m + w2.m}, c1 * c2 * eps_q_power(Rational(w1.m) * w2.n, cap));
    }
  }
  return r;
}

TorusElement torus_bracket(const TorusElement& x, const TorusElement& y) { return torus_mul(x, y) - torus_mul(y, x); }

TorusElement normalized_generator(int k, int m, int cap) {
  return TorusElement::word(k, m, eps_q_power(Rational(k * m, 2), cap), cap);
}

Report bracket_formula_check(int n, int m, int l, int k, int cap) {
  Report r;
  r.check = "qt.bracket";
  r.params = {{"n", n}, {"m", m}, {"l", l}, {"k", k}, {"D", cap}};
  TorusElement lhs = torus_bracket(TorusElement::word(n, m, 1, cap), TorusElement::word(l, k, 1, cap));
  EpsScalar pref = eps_q_power(Rational(m) * l, cap) - eps_q_power(Rational(n) * k, cap);
  TorusElement rhs = TorusElement::word(n + l, m + k, pref, cap);
  r.details.push_back("lhs = " + lhs.str());
  if (!(lhs == rhs)) r.fail("rhs = " + rhs.str());
  return r;
}

Report normalized_bracket_check(int m, int k, int n, int l, int cap) {
  Report r;
  r.check = "qt.normalized";
  r.params = {{"m", m}, {"k", k}, {"n", n}, {"l", l}, {"D", cap}};
  TorusElement lhs = torus_bracket(normalized_generator(k, m, cap), normalized_generator(l, n, cap));
  Rational h(l * m - k * n, 2);
  EpsScalar pref = eps_q_power(h, cap) - eps_q_power(-h, cap);
  TorusElement rhs = pref * normalized_generator(k + l, m + n, cap);
  r.details.push_back("lhs = " + lhs.str());
  if (!(lhs == rhs)) r.fail("rhs = " + rhs.str());
  return r;
}

WeylTable weyl_product(int s, int p, int b, int a) {
  // d^p z^b = sum_j C(p,j) b!/(b-j)! z^{b-j} d^{p-j}
  WeylTable t;
  for (int j = 0; j <= std::min(p, b); ++j) {
    Rational c = binomial(Rational(p), j) * falling(b, j);
    t[{s + b - j, p + a - j}] += c;
  }
  return t;
}

WeylTable weyl_commutator(int s, int p, int b, int a) {
  WeylTable t = weyl_product(s, p, b, a);
  for (const auto& [w, c] : weyl_product(b, a, s, p)) t[w] -= c;
  std::erase_if(t, [](const auto& kv) { return sgn(kv.second) == 0; });
  return t;
}

nlohmann::ordered_json weyl_table_json(const WeylTable& t) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& [w, c] : t) out.push_back({{"z", w.first}, {"d", w.second}, {"coeff", c.get_str()}});
  return out;
}

std::map<std::pair<int, int>, Rational> w_structure_constants(int p, int s, int a, int b) {
  std::map<std::pair<int, int>, Rational> out;
  for (const auto& [w, c] : weyl_commutator(s, p, b, a)) out[{w.second, w.first}] = c;
  return out;
}

FormalPoly FormalPoly::constant(const Rational& c, int cap) {
  FormalPoly p(cap);
  if (sgn(c) != 0) p.terms_[{0, 0, 0, 0, 0}] = c;
  return p;
}

FormalPoly FormalPoly::var(int which, int cap) {
  FormalPoly p(cap);
  Exponents e{0, 0, 0, 0, 0};
  e[which] = 1;
  if (which != kEps || cap >= 1) p.terms_[e] = 1;
  return p;
}

FormalPoly& FormalPoly::operator+=(const FormalPoly& o) {
  cap_ = std::min(cap_, o.cap_);
  for (const auto& [e, c] : o.terms_) {
    if (e[kEps] > cap_) continue;
    Rational& slot = terms_[e];
    slot += c;
    if (sgn(slot) == 0) terms_.erase(e);
  }
  std::erase_if(terms_, [this](const auto& kv) { return kv.first[kEps] > cap_; });
  return *this;
}

FormalPoly& FormalPoly::operator-=(const FormalPoly& o) { return *this += Rational(-1) * o; }

FormalPoly operator*(const FormalPoly& a, const FormalPoly& b) {
  FormalPoly r(std::min(a.cap_, b.cap_));
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) {
      FormalPoly::Exponents e;
      for (int i = 0; i < 5; ++i) e[i] = ea[i] + eb[i];
      if (e[FormalPoly::kEps] > r.cap_) continue;
      Rational& slot = r.terms_[e];
      slot += ca * cb;
      if (sgn(slot) == 0) r.terms_.erase(e);
    }
  }
  return r;
}

FormalPoly operator*(const Rational& c, FormalPoly a) {
  if (sgn(c) == 0) return FormalPoly(a.cap_);
  for (auto& [e, v] : a.terms_) v *= c;
  return a;
}

std::string FormalPoly::str() const {
  if (terms_.empty()) return "0";
  static const char* names[5] = {"n", "m", "l", "k", "eps"};
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    Rational a = abs(c);
    if (first) out << (sgn(c) < 0 ? "-" : "");
    else out << (sgn(c) < 0 ? " - " : " + ");
    first = false;
    bool unit = a == 1, wrote = false;
    if (!unit) {
      out << a.get_str();
      wrote = true;
    }
    for (int i = 0; i < 5; ++i) {
      if (e[i] == 0) continue;
      out << (wrote ? "*" : "") << names[i];
      if (e[i] > 1) out << "^" << e[i];
      wrote = true;
    }
    if (!wrote) out << "1";
  }
  return out.str();
}

FormalPoly formal_pow(const FormalPoly& x, int e) {
  FormalPoly r = FormalPoly::constant(1, x.cap());
  for (int i = 0; i < e; ++i) r = r * x;
  return r;
}

FormalPoly formal_q_power(const FormalPoly& x, int cap) {
  FormalPoly r(cap);
  FormalPoly eps = FormalPoly::var(FormalPoly::kEps, cap);
  FormalPoly term = FormalPoly::constant(1, cap);
  for (int s = 0; s <= cap; ++s) {
    r += Rational(1) / factorial(s) * term;
    term = term * x * eps;
  }
  return r;
}

FormalPoly combina_lhs(int alpha, int beta, int cap, CombinaPairing pairing) {
  using F = FormalPoly;
  F n = F::var(F::kN, cap), m = F::var(F::kM, cap), l = F::var(F::kL, cap), k = F::var(F::kK, cap);
  F eps = F::var(F::kEps, cap);
  F lhs(cap);
  // The eps-weight is s + b = beta + j, so j runs up to cap - beta.
  for (int j = 1; j <= cap - beta; ++j) {
    for (int p = 0; p <= alpha + j; ++p) {
      int a = alpha + j - p;
      for (int s = 0; s <= beta + j; ++s) {
        int b = beta + j - s;
        Rational c;
        if (pairing == CombinaPairing::kZPowerFirst) {
          auto t = weyl_commutator(p, s, a, b);
          auto it = t.find({alpha, beta});
          if (it == t.end()) continue;
          c = it->second;
        } else {
          auto t = weyl_commutator(s, p, b, a);
          auto it = t.find({beta, alpha});
          if (it == t.end()) continue;
          c = it->second;
        }
        Rational w = c / (factorial(p) * factorial(s) * factorial(a) * factorial(b));
        lhs += w * (formal_pow(n, p) * formal_pow(m * eps, s) * formal_pow(l, a) * formal_pow(k * eps, b));
      }
    }
  }
  return lhs;
}

FormalPoly combina_rhs(int alpha, int beta, int cap) {
  using F = FormalPoly;
  F n = F::var(F::kN, cap), m = F::var(F::kM, cap), l = F::var(F::kL, cap), k = F::var(F::kK, cap);
  F eps = F::var(F::kEps, cap);
  F pref = formal_q_power(m * l, cap) - formal_q_power(n * k, cap);
  Rational w = Rational(1) / (factorial(alpha) * factorial(beta));
  return w * (pref * formal_pow(n + l, alpha) * formal_pow((m + k) * eps, beta));
}

Report verify_combina(int alpha, int beta, int cap, CombinaPairing pairing) {
  Report r;
  r.check = "qt.combina";
  r.params = {{"alpha", alpha}, {"beta", beta}, {"D", cap},
              {"pairing", pairing == CombinaPairing::kZPowerFirst ? "z^p d^s" : "z^s d^p"}};
  FormalPoly lhs = combina_lhs(alpha, beta, cap, pairing);
  FormalPoly rhs = combina_rhs(alpha, beta, cap);
  if (lhs == rhs) {
    r.details.push_back(lhs.str() + " on both sides");
  } else {
    r.fail("lhs = " + lhs.str());
    r.details.push_back("rhs = " + rhs.str());
    if (lhs + rhs == FormalPoly(cap)) r.details.push_back("lhs = -rhs");
  }
  return r;
}

std::map<std::pair<int, int>, EpsScalar> resum_coefficients(int l, int k, int P, int cap) {
  std::map<std::pair<int, int>, EpsScalar> out;
  for (int p = 0; p <= P; ++p) {
    for (int s = 0; s <= cap; ++s) {
      Rational c = int_pow(l, p) * int_pow(k, s) / (factorial(p) * factorial(s) * (p + 1));
      if (sgn(c) == 0) continue;
      out[{p, s}] = EpsScalar::monomial(c, s, cap);
    }
  }
  return out;
}

}  // namespace qtorus
