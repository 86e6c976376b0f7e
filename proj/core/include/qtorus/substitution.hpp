#ifndef QTORUS_SUBSTITUTION_HPP
#define QTORUS_SUBSTITUTION_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include <json.hpp>

#include "qtorus/diff_poly.hpp"
#include "qtorus/psido.hpp"

namespace qtorus {

/// Differential substitution table for a reduced jet ring.
///
/// A rule (g, v) with g = w_k^{(j0)} replaces every jet w_k^{(j)}, j >= j0, by
/// the normal form of D_x^{j-j0} v. Rules are added in elimination order and
/// each value must already be in normal form, so one pass of `apply` reaches
/// the normal form and applying twice changes nothing.
class JetSubstitution {
 public:
  struct Rule {
    Generator jet;
    DiffPoly value;
  };

  /// Throws ConfigurationError if the family/base is already constrained or
  /// the value is not in normal form.
  void add(const Generator& jet, DiffPoly value);

  const std::vector<Rule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }
  /// True when g is replaced by some rule.
  bool constrains(const Generator& g) const;

  DiffPoly apply(const DiffPoly& p) const;
  PsiDO apply(const PsiDO& a) const;

  nlohmann::ordered_json to_json() const;

 private:
  std::optional<DiffPoly> image(const Generator& g) const;

  struct Cache {
    std::recursive_mutex mu;
    std::map<std::uint32_t, DiffPoly> derived;
  };

  std::vector<Rule> rules_;
  std::map<std::pair<std::uint32_t, int>, std::size_t> index_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Solves coefficient conditions r_j = 0 one degree at a time.
///
/// For every degree in `degrees` (processed in order), the residual is put in
/// normal form; if nonzero, the lowest-index jet of the given family and
/// derivative order that occurs only in a single linear term c*g is
/// eliminated as g = -(r - c g)/c. Throws ConfigurationError when no such jet
/// exists (an inconsistent or non-linear system).
JetSubstitution solve_linear_constraints(const PsiDO& residual, const std::vector<int>& degrees, Family family,
                                         int order, JetSubstitution table = {});

}  // namespace qtorus

#endif  // QTORUS_SUBSTITUTION_HPP
