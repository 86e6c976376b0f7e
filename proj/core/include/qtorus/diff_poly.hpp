#ifndef QTORUS_DIFF_POLY_HPP
#define QTORUS_DIFF_POLY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qtorus/eps_scalar.hpp"

namespace qtorus {

enum class Family : std::uint32_t { kOmega = 0, kOmegaBar = 1 };

/// A ring generator: either a jet (family, base index k >= 1, derivative
/// order j >= 0) or an explicit time t_i.
///
/// Packed into 32 bits so that integer order is the lexicographic order on
/// (kind, family, base, order).
class Generator {
 public:
  static Generator jet(Family family, int base, int order = 0);
  static Generator time(int index);
  static Generator from_code(std::uint32_t code) { return Generator(code); }

  bool is_jet() const { return (code_ >> 31) == 0; }
  bool is_time() const { return !is_jet(); }
  Family family() const { return static_cast<Family>((code_ >> 30) & 1u); }
  int base() const { return static_cast<int>((code_ >> 16) & 0x3fffu); }
  int order() const { return static_cast<int>(code_ & 0xffffu); }
  int time_index() const { return static_cast<int>(code_ & 0xffffu); }

  /// Jet with the derivative order raised by `by`.
  Generator differentiated(int by = 1) const;

  std::uint32_t code() const { return code_; }
  std::string str() const;

  friend auto operator<=>(const Generator&, const Generator&) = default;

 private:
  explicit Generator(std::uint32_t code) : code_(code) {}
  std::uint32_t code_ = 0;
};

/// Sorted product of generator powers; each entry packs (code << 32 | exponent).
using Monomial = std::vector<std::uint64_t>;

inline Generator monomial_generator(std::uint64_t entry) {
  return Generator::from_code(static_cast<std::uint32_t>(entry >> 32));
}
inline unsigned monomial_exponent(std::uint64_t entry) { return static_cast<unsigned>(entry & 0xffffffffu); }

Monomial monomial_mul(const Monomial& a, const Monomial& b);
std::string monomial_str(const Monomial& m);

struct MonomialHash {
  std::size_t operator()(const Monomial& m) const noexcept;
};

/// Sparse polynomial over EpsScalar in jets and explicit times.
///
/// Terms are kept sorted by monomial with no zero coefficients, so two
/// polynomials are equal iff their term lists are equal.
class DiffPoly {
 public:
  struct Term {
    Monomial mono;
    EpsScalar coeff;
  };

  DiffPoly() = default;
  DiffPoly(const EpsScalar& c);  // NOLINT(google-explicit-constructor)
  DiffPoly(const Rational& c) : DiffPoly(EpsScalar(c)) {}  // NOLINT
  DiffPoly(long c) : DiffPoly(EpsScalar(c)) {}             // NOLINT
  DiffPoly(int c) : DiffPoly(EpsScalar(c)) {}              // NOLINT
  DiffPoly(const Generator& g);                            // NOLINT

  /// Builds from arbitrary (possibly unsorted, duplicated, zero) terms.
  static DiffPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  EpsScalar constant_term() const;

  bool contains_jets() const;
  bool contains(const Generator& g) const;
  /// Highest power of t_1 (the only time with a nonzero x-derivative).
  int t1_degree() const;
  /// Number of x-derivatives after which the polynomial vanishes, or nullopt
  /// when it involves jets.
  std::optional<int> x_nilpotency() const;

  DiffPoly with_cap(int cap) const;

  DiffPoly operator-() const;
  DiffPoly& operator+=(const DiffPoly& o);
  DiffPoly& operator-=(const DiffPoly& o);
  DiffPoly& operator*=(const EpsScalar& c);
  friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(DiffPoly a, const EpsScalar& c) { return a *= c; }
  friend DiffPoly operator*(const EpsScalar& c, DiffPoly a) { return a *= c; }
  friend bool operator==(const DiffPoly& a, const DiffPoly& b);

  /// this += c * p
  void add_scaled(const DiffPoly& p, const EpsScalar& c);

  std::string str() const;

 private:
  std::vector<Term> terms_;
};

/// Hash-based accumulator for sums of many products.
class DiffPolyBuilder {
 public:
  void add(const Monomial& m, const EpsScalar& c);
  void add(const DiffPoly& p, const EpsScalar& scale = EpsScalar(1L));
  void add_product(const DiffPoly& a, const DiffPoly& b, const EpsScalar& scale = EpsScalar(1L));
  DiffPoly finish();

 private:
  std::unordered_map<Monomial, EpsScalar, MonomialHash> acc_;
};

DiffPoly normalize(DiffPoly p);

/// Total x-derivative: jets shift their order, t_1 -> 1, t_i -> 0 for i > 1.
DiffPoly total_x_derivative(const DiffPoly& p);
DiffPoly total_x_derivative(const DiffPoly& p, int times);

/// Generic derivation extension: `action(g)` gives the image of a generator.
DiffPoly apply_generator_map(const DiffPoly& p, const std::function<DiffPoly(const Generator&)>& action);

/// Ring homomorphism replacing generators; `image(g)` returns nullopt to keep g.
DiffPoly substitute(const DiffPoly& p, const std::function<std::optional<DiffPoly>(const Generator&)>& image);

/// Convenience: the jet omega_k^{(j)} (or omega-bar) as a polynomial.
DiffPoly jet(int base, int order = 0, Family family = Family::kOmega);
DiffPoly time_var(int index);

}  // namespace qtorus

#endif  // QTORUS_DIFF_POLY_HPP
