#ifndef QTORUS_PSIDO_HPP
#define QTORUS_PSIDO_HPP

#include <climits>
#include <map>
#include <optional>
#include <string>
#include <utility>

#include <json.hpp>

#include "qtorus/derivation.hpp"
#include "qtorus/diff_poly.hpp"

namespace qtorus {

/// Truncated pseudo-differential operator sum_j a_j d^j.
///
/// Coefficients are tracked for degrees in [window, top]. Degrees below the
/// window are unknown, never implicitly zero; an exact operator (finite
/// expression such as d^2 + u or Gamma) has window kExact. Inside the window,
/// an unstored degree is a known zero.
class PsiDO {
 public:
  static constexpr int kExact = INT_MIN / 4;

  PsiDO() = default;
  PsiDO(int top, int window) : top_(top), window_(window) {}

  static PsiDO zero() { return PsiDO(0, kExact); }
  static PsiDO identity();
  /// c * d^power, exact.
  static PsiDO d(int power, const EpsScalar& c = EpsScalar(1L));
  /// Multiplication operator f d^0, exact.
  static PsiDO multiplication(const DiffPoly& f);

  int top() const { return top_; }
  int window() const { return window_; }
  bool is_exact() const { return window_ == kExact; }
  /// Lowest stored degree (or top when nothing is stored).
  int lowest_stored() const;

  /// Coefficient of d^degree; throws WindowExhausted below the window.
  const DiffPoly& coeff(int degree) const;
  void set(int degree, DiffPoly c);
  void add_to(int degree, const DiffPoly& c);
  const std::map<int, DiffPoly>& coeffs() const { return coeffs_; }

  /// Raises the window to `w` (drops coefficients below it).
  PsiDO truncated(int w) const;
  PsiDO with_cap(int cap) const;
  /// Same operator with the tracked top degree set to `t`.
  PsiDO retopped(int t) const;

  PsiDO operator-() const;
  PsiDO& operator+=(const PsiDO& o);
  PsiDO& operator-=(const PsiDO& o);
  PsiDO& operator*=(const EpsScalar& c);
  friend PsiDO operator+(PsiDO a, const PsiDO& b) { return a += b; }
  friend PsiDO operator-(PsiDO a, const PsiDO& b) { return a -= b; }
  friend PsiDO operator*(PsiDO a, const EpsScalar& c) { return a *= c; }
  friend PsiDO operator*(const EpsScalar& c, PsiDO a) { return a *= c; }

  std::string str() const;
  nlohmann::json to_json() const;

 private:
  std::map<int, DiffPoly, std::greater<>> ordered() const;

  std::map<int, DiffPoly> coeffs_;
  int top_ = 0;
  int window_ = kExact;
};

/// Operator expansion would not terminate (exact operands with a negative
/// power acting on jets) and no floor was supplied.
class InfiniteExpansion : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Product by the generalized Leibniz rule. The result window is
/// max(W_A + N_B, W_B + N_A), additionally raised to `floor` when given.
PsiDO compose(const PsiDO& a, const PsiDO& b, std::optional<int> floor = std::nullopt);
PsiDO compose(std::initializer_list<const PsiDO*> factors, std::optional<int> floor = std::nullopt);
PsiDO power(const PsiDO& a, int n, std::optional<int> floor = std::nullopt);

/// Formal adjoint with d* = -d.
PsiDO adjoint(const PsiDO& a, std::optional<int> floor = std::nullopt);

PsiDO plus_part(const PsiDO& a);
PsiDO minus_part(const PsiDO& a);
std::pair<PsiDO, PsiDO> split(const PsiDO& a);

/// Neumann-series inverse of 1 + R with top(R) <= -1.
PsiDO invert_unit(const PsiDO& a, int depth);

PsiDO commutator(const PsiDO& a, const PsiDO& b, std::optional<int> floor = std::nullopt);

/// Coefficient-wise action of a derivation. The window is raised past the
/// first coefficient the derivation cannot certify.
PsiDO apply_derivation(const Derivation& d, const PsiDO& a);

/// Laurent polynomial sum a_j z^j in the spectral variable.
struct SpectralSymbol {
  std::map<int, DiffPoly> coeffs;
  int window = PsiDO::kExact;
  std::string str() const;
  friend bool operator==(const SpectralSymbol&, const SpectralSymbol&) = default;
};
SpectralSymbol symbol(const PsiDO& a);

/// Degrees on which both operators are known: [max windows, max tops].
std::pair<int, int> common_range(const PsiDO& a, const PsiDO& b);

/// Degree of the highest coefficient where a and b differ on their common
/// window, or nullopt when they agree.
std::optional<int> first_difference(const PsiDO& a, const PsiDO& b);

bool equal_on_window(const PsiDO& a, const PsiDO& b);

}  // namespace qtorus

#endif  // QTORUS_PSIDO_HPP
