#include "qtorus/psido.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

namespace qtorus {

namespace {

const DiffPoly& zero_poly() {
  static const DiffPoly z;
  return z;
}

int clamp_window(long long w) { return w <= PsiDO::kExact ? PsiDO::kExact : static_cast<int>(w); }

// Cached x-derivatives of one coefficient.
class DerivativeCache {
 public:
  explicit DerivativeCache(const DiffPoly& base) : nil_(base.x_nilpotency()) { ders_.push_back(base); }
  const DiffPoly& get(int k) {
    while (static_cast<int>(ders_.size()) <= k) {
      if (ders_.back().is_zero()) return zero_poly();
      ders_.push_back(total_x_derivative(ders_.back()));
    }
    return ders_[k];
  }
  std::optional<int> nilpotency() const { return nil_; }

 private:
  std::vector<DiffPoly> ders_;
  std::optional<int> nil_;
};

std::string degree_term(int j) {
  if (j == 0) return "";
  if (j == 1) return "D";
  return "D^" + std::to_string(j);
}

}  // namespace

PsiDO PsiDO::identity() { return d(0); }

PsiDO PsiDO::d(int power, const EpsScalar& c) {
  PsiDO r(power, kExact);
  r.set(power, DiffPoly(c));
  return r;
}

PsiDO PsiDO::multiplication(const DiffPoly& f) {
  PsiDO r(0, kExact);
  r.set(0, f);
  return r;
}

int PsiDO::lowest_stored() const { return coeffs_.empty() ? top_ : coeffs_.begin()->first; }

const DiffPoly& PsiDO::coeff(int degree) const {
  if (degree < window_) {
    throw WindowExhausted("coefficient of D^" + std::to_string(degree) + " lies below the window " +
                          std::to_string(window_));
  }
  auto it = coeffs_.find(degree);
  return it == coeffs_.end() ? zero_poly() : it->second;
}

void PsiDO::set(int degree, DiffPoly c) {
  if (degree < window_) return;
  if (degree > top_) top_ = degree;
  if (c.is_zero()) coeffs_.erase(degree);
  else coeffs_[degree] = std::move(c);
}

void PsiDO::add_to(int degree, const DiffPoly& c) {
  if (degree < window_ || c.is_zero()) return;
  if (degree > top_) top_ = degree;
  auto& slot = coeffs_[degree];
  slot += c;
  if (slot.is_zero()) coeffs_.erase(degree);
}

PsiDO PsiDO::truncated(int w) const {
  PsiDO r = *this;
  if (w <= r.window_) return r;
  r.window_ = w;
  r.coeffs_.erase(r.coeffs_.begin(), r.coeffs_.lower_bound(w));
  return r;
}

PsiDO PsiDO::retopped(int t) const {
  if (!coeffs_.empty() && coeffs_.rbegin()->first > t) {
    throw std::logic_error("cannot lower top below a stored coefficient");
  }
  PsiDO r = *this;
  r.top_ = t;
  return r;
}

PsiDO PsiDO::with_cap(int cap) const {
  PsiDO r(top_, window_);
  for (const auto& [j, c] : coeffs_) r.set(j, c.with_cap(cap));
  return r;
}

PsiDO PsiDO::operator-() const {
  PsiDO r = *this;
  for (auto& [j, c] : r.coeffs_) c = -c;
  return r;
}

PsiDO& PsiDO::operator+=(const PsiDO& o) {
  int w = std::max(window_, o.window_);
  *this = truncated(w);
  top_ = std::max(top_, o.top_);
  for (const auto& [j, c] : o.coeffs_) {
    if (j >= w) add_to(j, c);
  }
  return *this;
}

PsiDO& PsiDO::operator-=(const PsiDO& o) { return *this += -o; }

PsiDO& PsiDO::operator*=(const EpsScalar& c) {
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    it->second *= c;
    if (it->second.is_zero()) it = coeffs_.erase(it);
    else ++it;
  }
  return *this;
}

std::map<int, DiffPoly, std::greater<>> PsiDO::ordered() const {
  return std::map<int, DiffPoly, std::greater<>>(coeffs_.begin(), coeffs_.end());
}

std::string PsiDO::str() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [j, c] : ordered()) {
    if (!first) os << " + ";
    first = false;
    std::string d = degree_term(j);
    if (d.empty()) os << "(" << c.str() << ")";
    else if (c.is_constant() && c.constant_term() == EpsScalar(1L)) os << d;
    else os << "(" << c.str() << ")*" << d;
  }
  if (first) os << "0";
  if (!is_exact()) os << " + O(D^" << (window_ - 1) << ")";
  return os.str();
}

nlohmann::json PsiDO::to_json() const {
  nlohmann::json coeffs = nlohmann::json::array();
  for (const auto& [j, c] : ordered()) coeffs.push_back({{"degree", j}, {"coeff", c.str()}});
  nlohmann::json out;
  out["top"] = top_;
  out["window"] = is_exact() ? nlohmann::json(nullptr) : nlohmann::json(window_);
  out["coeffs"] = std::move(coeffs);
  return out;
}

PsiDO compose(const PsiDO& a, const PsiDO& b, std::optional<int> floor) {
  const int top = a.top() + b.top();
  auto shifted = [](int w, int n) { return w == PsiDO::kExact ? PsiDO::kExact : clamp_window(static_cast<long long>(w) + n); };
  int window = std::max(shifted(a.window(), b.top()), shifted(b.window(), a.top()));
  if (floor) window = std::max(window, *floor);

  std::map<int, DerivativeCache> bders;
  for (const auto& [r, c] : b.coeffs()) bders.emplace(r, DerivativeCache(c));

  // For an exact result, find the lowest degree any term reaches.
  int lowest = window;
  if (window == PsiDO::kExact) {
    lowest = top;
    for (const auto& [p, ac] : a.coeffs()) {
      for (auto& [r, cache] : bders) {
        auto nil = cache.nilpotency();
        int kmax;
        if (p >= 0) {
          kmax = nil ? std::min(p, *nil - 1) : p;
        } else {
          if (!nil) {
            throw InfiniteExpansion("D^" + std::to_string(p) +
                                    " acting on a jet coefficient produces an infinite series; supply a floor");
          }
          kmax = *nil - 1;
        }
        lowest = std::min(lowest, p + r - std::max(kmax, 0));
      }
    }
  }

  PsiDO out(top, window);
  std::map<std::pair<int, int>, Rational> binom;
  auto C = [&](int p, int k) -> const Rational& {
    auto key = std::make_pair(p, k);
    auto it = binom.find(key);
    if (it == binom.end()) it = binom.emplace(key, binomial(Rational(p), k)).first;
    return it->second;
  };

  for (int j = top; j >= lowest; --j) {
    DiffPolyBuilder acc;
    bool any = false;
    for (const auto& [p, ac] : a.coeffs()) {
      for (int k = 0;; ++k) {
        if (p >= 0 && k > p) break;
        int r = j - p + k;
        if (r > b.top()) break;
        auto it = bders.find(r);
        if (it == bders.end()) continue;
        const DiffPoly& der = it->second.get(k);
        if (der.is_zero()) continue;
        acc.add_product(ac, der, EpsScalar(C(p, k)));
        any = true;
      }
    }
    if (any) out.set(j, acc.finish());
  }
  return out;
}

PsiDO compose(std::initializer_list<const PsiDO*> factors, std::optional<int> floor) {
  std::vector<const PsiDO*> fs(factors);
  if (fs.empty()) return PsiDO::identity();
  // Each partial product only needs degrees that can still reach the floor.
  std::vector<int> suffix_top(fs.size() + 1, 0);
  for (std::size_t i = fs.size(); i-- > 0;) suffix_top[i] = suffix_top[i + 1] + fs[i]->top();
  PsiDO acc = *fs[0];
  if (floor) acc = acc.truncated(*floor - suffix_top[1]);
  for (std::size_t i = 1; i < fs.size(); ++i) {
    std::optional<int> f;
    if (floor) f = *floor - suffix_top[i + 1];
    acc = compose(acc, *fs[i], f);
  }
  return acc;
}

PsiDO power(const PsiDO& a, int n, std::optional<int> floor) {
  if (n < 0) throw std::invalid_argument("power expects a non-negative exponent");
  if (n == 0) return PsiDO::identity();
  PsiDO acc = a;
  for (int i = 2; i <= n; ++i) {
    std::optional<int> f;
    if (floor) f = *floor - (n - i) * a.top();
    acc = compose(acc, a, f);
  }
  return acc;
}

PsiDO adjoint(const PsiDO& a, std::optional<int> floor) {
  int window = a.window();
  if (floor) window = std::max(window, *floor);
  int lowest = window;
  if (window == PsiDO::kExact) {
    lowest = a.top();
    for (const auto& [i, c] : a.coeffs()) {
      auto nil = c.x_nilpotency();
      int kmax;
      if (i >= 0) {
        kmax = nil ? std::min(i, *nil - 1) : i;
      } else {
        if (!nil) throw InfiniteExpansion("adjoint of a negative power with a jet coefficient needs a floor");
        kmax = *nil - 1;
      }
      lowest = std::min(lowest, i - std::max(kmax, 0));
    }
  }
  PsiDO out(a.top(), window);
  for (int j = a.top(); j >= lowest; --j) {
    DiffPolyBuilder acc;
    bool any = false;
    for (auto it = a.coeffs().lower_bound(j); it != a.coeffs().end(); ++it) {
      int i = it->first;
      int k = i - j;
      Rational c = binomial(Rational(i), k);
      if (sgn(c) == 0) continue;
      if (i % 2 != 0) c = -c;
      DiffPoly der = total_x_derivative(it->second, k);
      if (der.is_zero()) continue;
      acc.add(der, EpsScalar(c));
      any = true;
    }
    if (any) out.set(j, acc.finish());
  }
  return out;
}

PsiDO plus_part(const PsiDO& a) {
  int w = a.window() <= 0 ? PsiDO::kExact : a.window();
  PsiDO r(std::max(a.top(), 0), w);
  for (const auto& [j, c] : a.coeffs()) {
    if (j >= 0) r.set(j, c);
  }
  return r;
}

PsiDO minus_part(const PsiDO& a) {
  PsiDO r(std::min(a.top(), -1), a.window());
  for (const auto& [j, c] : a.coeffs()) {
    if (j < 0) r.set(j, c);
  }
  return r;
}

std::pair<PsiDO, PsiDO> split(const PsiDO& a) { return {plus_part(a), minus_part(a)}; }

PsiDO invert_unit(const PsiDO& a, int depth) {
  if (depth < 0) throw std::invalid_argument("inversion depth must be non-negative");
  for (const auto& [j, c] : a.coeffs()) {
    if (j > 0) throw std::invalid_argument("invert_unit expects 1 + (negative order terms)");
  }
  if (a.window() > 0 || !(a.coeff(0) == DiffPoly(1))) {
    throw std::invalid_argument("invert_unit expects a leading coefficient equal to 1");
  }
  const PsiDO neg = (-minus_part(a)).retopped(-1);
  const int floor = std::max(-depth, a.window());
  PsiDO sum = PsiDO::identity().truncated(floor);
  PsiDO term = PsiDO::identity();
  for (int i = 1; i <= depth; ++i) {
    term = compose(term, neg, floor);
    if (term.coeffs().empty()) break;
    sum += term;
  }
  return sum.retopped(0);
}

PsiDO commutator(const PsiDO& a, const PsiDO& b, std::optional<int> floor) {
  return compose(a, b, floor) - compose(b, a, floor);
}

PsiDO apply_derivation(const Derivation& d, const PsiDO& a) {
  PsiDO out(a.top(), a.window());
  // Walk downward; stop at the first coefficient the derivation cannot certify.
  for (auto it = a.coeffs().rbegin(); it != a.coeffs().rend(); ++it) {
    try {
      out.set(it->first, d.apply(it->second));
    } catch (const WindowExhausted&) {
      return out.truncated(it->first + 1);
    }
  }
  return out;
}

std::string SpectralSymbol::str() const {
  std::ostringstream os;
  bool first = true;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    if (!first) os << " + ";
    first = false;
    os << "(" << it->second.str() << ")";
    if (it->first != 0) os << "*z^" << it->first;
  }
  if (first) os << "0";
  return os.str();
}

SpectralSymbol symbol(const PsiDO& a) {
  SpectralSymbol s;
  s.window = a.window();
  for (const auto& [j, c] : a.coeffs()) s.coeffs[j] = c;
  return s;
}

std::pair<int, int> common_range(const PsiDO& a, const PsiDO& b) {
  return {std::max(a.window(), b.window()), std::max(a.top(), b.top())};
}

std::optional<int> first_difference(const PsiDO& a, const PsiDO& b) {
  auto [lo, hi] = common_range(a, b);
  std::set<int, std::greater<>> degrees;
  for (const auto& [j, c] : a.coeffs()) {
    if (j >= lo) degrees.insert(j);
  }
  for (const auto& [j, c] : b.coeffs()) {
    if (j >= lo) degrees.insert(j);
  }
  (void)hi;
  for (int j : degrees) {
    const DiffPoly& ca = j >= a.window() ? a.coeff(j) : zero_poly();
    const DiffPoly& cb = j >= b.window() ? b.coeff(j) : zero_poly();
    if (!(ca == cb)) return j;
  }
  return std::nullopt;
}

bool equal_on_window(const PsiDO& a, const PsiDO& b) { return !first_difference(a, b).has_value(); }

}  // namespace qtorus
