#ifndef QTORUS_DERIVATION_HPP
#define QTORUS_DERIVATION_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "qtorus/diff_poly.hpp"

namespace qtorus {

/// A computation needed a coefficient outside the guaranteed truncation window.
class WindowExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parameters or generators inconsistent with the configured context.
class ConfigurationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Derivation of the jet/time ring.
///
/// Stores the action on base jets (order 0) and on explicit times. The action
/// on a jet of order j is the j-th total x-derivative of the base action, so
/// the derivation commutes with the total x-derivative by construction.
class Derivation {
 public:
  Derivation() = default;
  Derivation(std::string name, int time_horizon);

  const std::string& name() const { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }
  int time_horizon() const { return horizon_; }

  /// Normal form of a reduced ring. When set, jet images and results of
  /// `apply` are passed through it; generators eliminated by the reduction
  /// still act as D_x^j of their stored base action.
  using NormalForm = std::function<DiffPoly(const DiffPoly&)>;
  void set_normal_form(NormalForm nf);
  const NormalForm& normal_form() const { return nf_; }

  void set_jet_action(Family family, int base, DiffPoly action);
  void set_time_action(int index, const Rational& value);

  bool has_jet(Family family, int base) const;
  /// Largest K such that every base jet 1..K of the family has an action.
  int jet_depth(Family family) const;
  const DiffPoly& jet_action(Family family, int base) const;
  Rational time_action(int index) const;

  /// Image of a single generator; throws WindowExhausted for jets beyond the
  /// stored range and ConfigurationError for times beyond the horizon.
  DiffPoly on_generator(const Generator& g) const;

  DiffPoly apply(const DiffPoly& p) const;

  Derivation& operator+=(const Derivation& o);
  friend Derivation operator+(Derivation a, const Derivation& b) { return a += b; }
  friend Derivation operator*(const EpsScalar& c, const Derivation& d);

 private:
  struct Cache {
    std::mutex mu;
    std::unordered_map<std::uint32_t, DiffPoly> jets;
  };

  std::string name_;
  int horizon_ = 0;
  std::map<std::pair<std::uint32_t, int>, DiffPoly> jets_;
  std::map<int, Rational> times_;
  NormalForm nf_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

DiffPoly apply_derivation(const Derivation& d, const DiffPoly& p);

/// [d1, d2] applied to p: d1(d2(p)) - d2(d1(p)).
DiffPoly derivation_commutator(const Derivation& d1, const Derivation& d2, const DiffPoly& p);

}  // namespace qtorus

#endif  // QTORUS_DERIVATION_HPP
