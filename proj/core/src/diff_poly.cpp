#include "qtorus/diff_poly.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace qtorus {

namespace {

constexpr std::uint32_t kTimeBit = 1u << 31;

std::uint64_t pack(Generator g, unsigned exp) { return (static_cast<std::uint64_t>(g.code()) << 32) | exp; }

bool mono_less(const DiffPoly::Term& a, const DiffPoly::Term& b) { return a.mono < b.mono; }

// Monomial with one power of the factor at `pos` removed.
Monomial drop_one(const Monomial& m, std::size_t pos) {
  Monomial r = m;
  unsigned e = monomial_exponent(r[pos]);
  if (e == 1) {
    r.erase(r.begin() + static_cast<std::ptrdiff_t>(pos));
  } else {
    r[pos] = pack(monomial_generator(r[pos]), e - 1);
  }
  return r;
}

}  // namespace

Generator Generator::jet(Family family, int base, int order) {
  if (base < 1 || base > 0x3fff) throw std::out_of_range("jet base index out of range");
  if (order < 0 || order > 0xffff) throw std::out_of_range("jet derivative order out of range");
  return Generator((static_cast<std::uint32_t>(family) << 30) | (static_cast<std::uint32_t>(base) << 16) |
                   static_cast<std::uint32_t>(order));
}

Generator Generator::time(int index) {
  if (index < 1 || index > 0xffff) throw std::out_of_range("time index out of range");
  return Generator(kTimeBit | static_cast<std::uint32_t>(index));
}

Generator Generator::differentiated(int by) const {
  if (!is_jet()) throw std::logic_error("only jets carry a derivative order");
  return jet(family(), base(), order() + by);
}

std::string Generator::str() const {
  std::ostringstream os;
  if (is_time()) {
    os << "t" << time_index();
    return os.str();
  }
  os << (family() == Family::kOmega ? "w" : "wb") << base();
  int j = order();
  if (j > 0 && j <= 3) os << "_" << std::string(static_cast<std::size_t>(j), 'x');
  else if (j > 3) os << "_x" << j;
  return os.str();
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial r;
  r.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    std::uint32_t ga = static_cast<std::uint32_t>(a[i] >> 32);
    std::uint32_t gb = static_cast<std::uint32_t>(b[j] >> 32);
    if (ga < gb) {
      r.push_back(a[i++]);
    } else if (gb < ga) {
      r.push_back(b[j++]);
    } else {
      r.push_back(a[i] + monomial_exponent(b[j]));
      ++i;
      ++j;
    }
  }
  r.insert(r.end(), a.begin() + static_cast<std::ptrdiff_t>(i), a.end());
  r.insert(r.end(), b.begin() + static_cast<std::ptrdiff_t>(j), b.end());
  return r;
}

std::string monomial_str(const Monomial& m) {
  if (m.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (i) s += "*";
    s += monomial_generator(m[i]).str();
    unsigned e = monomial_exponent(m[i]);
    if (e > 1) s += "^" + std::to_string(e);
  }
  return s;
}

std::size_t MonomialHash::operator()(const Monomial& m) const noexcept {
  std::uint64_t h = 0x9e3779b97f4a7c15ull;
  for (std::uint64_t v : m) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 0xff51afd7ed558ccdull;
  }
  return static_cast<std::size_t>(h ^ (h >> 33));
}

DiffPoly::DiffPoly(const EpsScalar& c) {
  if (!c.is_zero()) terms_.push_back({Monomial{}, c});
}

DiffPoly::DiffPoly(const Generator& g) { terms_.push_back({Monomial{pack(g, 1)}, EpsScalar(1L)}); }

DiffPoly DiffPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(), mono_less);
  DiffPoly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff.is_zero()) p.terms_.pop_back();
  return p;
}

bool DiffPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty()); }

EpsScalar DiffPoly::constant_term() const {
  if (!terms_.empty() && terms_[0].mono.empty()) return terms_[0].coeff;
  return EpsScalar();
}

bool DiffPoly::contains_jets() const {
  for (const auto& t : terms_) {
    for (auto e : t.mono) {
      if (monomial_generator(e).is_jet()) return true;
    }
  }
  return false;
}

bool DiffPoly::contains(const Generator& g) const {
  for (const auto& t : terms_) {
    for (auto e : t.mono) {
      if (monomial_generator(e) == g) return true;
    }
  }
  return false;
}

int DiffPoly::t1_degree() const {
  const Generator t1 = Generator::time(1);
  int d = 0;
  for (const auto& t : terms_) {
    for (auto e : t.mono) {
      if (monomial_generator(e) == t1) d = std::max(d, static_cast<int>(monomial_exponent(e)));
    }
  }
  return d;
}

std::optional<int> DiffPoly::x_nilpotency() const {
  if (contains_jets()) return std::nullopt;
  if (is_zero()) return 0;
  return t1_degree() + 1;
}

DiffPoly DiffPoly::with_cap(int cap) const {
  DiffPoly r;
  r.terms_.reserve(terms_.size());
  for (const auto& t : terms_) {
    EpsScalar c = t.coeff.with_cap(cap);
    if (!c.is_zero()) r.terms_.push_back({t.mono, std::move(c)});
  }
  return r;
}

DiffPoly DiffPoly::operator-() const {
  DiffPoly r = *this;
  for (auto& t : r.terms_) t.coeff = -t.coeff;
  return r;
}

DiffPoly& DiffPoly::operator+=(const DiffPoly& o) {
  add_scaled(o, EpsScalar(1L));
  return *this;
}

DiffPoly& DiffPoly::operator-=(const DiffPoly& o) {
  add_scaled(o, EpsScalar(-1L));
  return *this;
}

void DiffPoly::add_scaled(const DiffPoly& o, const EpsScalar& c) {
  if (o.terms_.empty() || c.is_zero()) {
    // A capped zero still lowers the cap of this polynomial's coefficients.
    if (c.cap() != EpsScalar::kUnbounded && !o.terms_.empty()) *this = with_cap(c.cap());
    return;
  }
  const bool unit = c.is_rational() && c.cap() == EpsScalar::kUnbounded && c.coeff(0) == 1;
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  auto scaled = [&](const Term& t) { return unit ? t.coeff : t.coeff * c; };
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].mono < o.terms_[j].mono)) {
      EpsScalar v = c.cap() == EpsScalar::kUnbounded ? terms_[i].coeff : terms_[i].coeff.with_cap(c.cap());
      if (!v.is_zero()) out.push_back({std::move(terms_[i].mono), std::move(v)});
      ++i;
    } else if (i == terms_.size() || o.terms_[j].mono < terms_[i].mono) {
      EpsScalar v = scaled(o.terms_[j]);
      if (!v.is_zero()) out.push_back({o.terms_[j].mono, std::move(v)});
      ++j;
    } else {
      EpsScalar v = terms_[i].coeff + scaled(o.terms_[j]);
      if (!v.is_zero()) out.push_back({std::move(terms_[i].mono), std::move(v)});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
}

DiffPoly& DiffPoly::operator*=(const EpsScalar& c) {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (auto& t : terms_) {
    EpsScalar v = t.coeff * c;
    if (!v.is_zero()) out.push_back({std::move(t.mono), std::move(v)});
  }
  terms_ = std::move(out);
  return *this;
}

DiffPoly operator+(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly r = a;
  r += b;
  return r;
}

DiffPoly operator-(const DiffPoly& a, const DiffPoly& b) {
  DiffPoly r = a;
  r -= b;
  return r;
}

DiffPoly operator*(const DiffPoly& a, const DiffPoly& b) {
  if (a.is_zero() || b.is_zero()) return DiffPoly();
  if (a.is_constant()) return b * a.constant_term();
  if (b.is_constant()) return a * b.constant_term();
  DiffPolyBuilder builder;
  builder.add_product(a, b);
  return builder.finish();
}

bool operator==(const DiffPoly& a, const DiffPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (a.terms_[i].mono != b.terms_[i].mono || !(a.terms_[i].coeff == b.terms_[i].coeff)) return false;
  }
  return true;
}

std::string DiffPoly::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    std::string c = t.coeff.str();
    bool simple = t.coeff.is_rational();
    if (simple) {
      Rational v = t.coeff.coeff(0);
      bool neg = sgn(v) < 0;
      Rational mag = abs(v);
      if (!first) os << (neg ? " - " : " + ");
      else if (neg) os << "-";
      if (t.mono.empty()) os << mag.get_str();
      else if (mag != 1) os << mag.get_str() << "*" << monomial_str(t.mono);
      else os << monomial_str(t.mono);
    } else {
      if (!first) os << " + ";
      os << "(" << c << ")";
      if (!t.mono.empty()) os << "*" << monomial_str(t.mono);
    }
    first = false;
  }
  return os.str();
}

void DiffPolyBuilder::add(const Monomial& m, const EpsScalar& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = acc_.try_emplace(m, c);
  if (!inserted) it->second += c;
}

void DiffPolyBuilder::add(const DiffPoly& p, const EpsScalar& scale) {
  for (const auto& t : p.terms()) add(t.mono, t.coeff * scale);
}

void DiffPolyBuilder::add_product(const DiffPoly& a, const DiffPoly& b, const EpsScalar& scale) {
  if (a.is_zero() || b.is_zero() || scale.is_zero()) return;
  acc_.reserve(acc_.size() + a.size() * b.size());
  for (const auto& ta : a.terms()) {
    EpsScalar ca = ta.coeff * scale;
    for (const auto& tb : b.terms()) add(monomial_mul(ta.mono, tb.mono), ca * tb.coeff);
  }
}

DiffPoly DiffPolyBuilder::finish() {
  std::vector<DiffPoly::Term> terms;
  terms.reserve(acc_.size());
  for (auto& [m, c] : acc_) {
    if (!c.is_zero()) terms.push_back({m, std::move(c)});
  }
  acc_.clear();
  return DiffPoly::from_terms(std::move(terms));
}

DiffPoly normalize(DiffPoly p) { return DiffPoly::from_terms(std::vector<DiffPoly::Term>(p.terms())); }

DiffPoly total_x_derivative(const DiffPoly& p) {
  DiffPolyBuilder b;
  const Generator t1 = Generator::time(1);
  for (const auto& t : p.terms()) {
    for (std::size_t pos = 0; pos < t.mono.size(); ++pos) {
      Generator g = monomial_generator(t.mono[pos]);
      unsigned e = monomial_exponent(t.mono[pos]);
      if (g.is_jet()) {
        Monomial rest = drop_one(t.mono, pos);
        b.add(monomial_mul(rest, Monomial{pack(g.differentiated(), 1)}), t.coeff * EpsScalar(static_cast<long>(e)));
      } else if (g == t1) {
        b.add(drop_one(t.mono, pos), t.coeff * EpsScalar(static_cast<long>(e)));
      }
    }
  }
  return b.finish();
}

DiffPoly total_x_derivative(const DiffPoly& p, int times) {
  DiffPoly r = p;
  for (int i = 0; i < times && !r.is_zero(); ++i) r = total_x_derivative(r);
  return r;
}

DiffPoly apply_generator_map(const DiffPoly& p, const std::function<DiffPoly(const Generator&)>& action) {
  DiffPolyBuilder b;
  for (const auto& t : p.terms()) {
    for (std::size_t pos = 0; pos < t.mono.size(); ++pos) {
      Generator g = monomial_generator(t.mono[pos]);
      unsigned e = monomial_exponent(t.mono[pos]);
      DiffPoly img = action(g);
      if (img.is_zero()) continue;
      Monomial rest = drop_one(t.mono, pos);
      EpsScalar c = t.coeff * EpsScalar(static_cast<long>(e));
      for (const auto& ti : img.terms()) b.add(monomial_mul(rest, ti.mono), c * ti.coeff);
    }
  }
  return b.finish();
}

DiffPoly substitute(const DiffPoly& p, const std::function<std::optional<DiffPoly>(const Generator&)>& image) {
  DiffPolyBuilder b;
  for (const auto& t : p.terms()) {
    DiffPoly acc(t.coeff);
    Monomial kept;
    for (auto entry : t.mono) {
      Generator g = monomial_generator(entry);
      unsigned e = monomial_exponent(entry);
      auto img = image(g);
      if (!img) {
        kept.push_back(entry);
        continue;
      }
      for (unsigned i = 0; i < e; ++i) acc = acc * *img;
    }
    for (const auto& ta : acc.terms()) b.add(monomial_mul(kept, ta.mono), ta.coeff);
  }
  return b.finish();
}

DiffPoly jet(int base, int order, Family family) { return DiffPoly(Generator::jet(family, base, order)); }

DiffPoly time_var(int index) { return DiffPoly(Generator::time(index)); }

}  // namespace qtorus
