#include "qtorus/substitution.hpp"

#include <string>

#include "qtorus/derivation.hpp"

namespace qtorus {

namespace {

std::pair<std::uint32_t, int> family_key(const Generator& g) {
  return {static_cast<std::uint32_t>(g.family()), g.base()};
}

}  // namespace

void JetSubstitution::add(const Generator& jet, DiffPoly value) {
  if (!jet.is_jet()) throw ConfigurationError("only jets can be substituted");
  if (index_.count(family_key(jet)) != 0) {
    throw ConfigurationError(Generator::jet(jet.family(), jet.base()).str() + " is already constrained");
  }
  if (!(apply(value) == value)) throw ConfigurationError("substitution value is not in normal form");
  for (int j = jet.order(); j <= jet.order() + 8; ++j) {
    if (value.contains(Generator::jet(jet.family(), jet.base(), j))) {
      throw ConfigurationError("substitution value for " + jet.str() + " contains the jet itself");
    }
  }
  index_[family_key(jet)] = rules_.size();
  rules_.push_back({jet, std::move(value)});
  cache_ = std::make_shared<Cache>();
}

bool JetSubstitution::constrains(const Generator& g) const {
  if (!g.is_jet()) return false;
  auto it = index_.find(family_key(g));
  return it != index_.end() && g.order() >= rules_[it->second].jet.order();
}

std::optional<DiffPoly> JetSubstitution::image(const Generator& g) const {
  if (!constrains(g)) return std::nullopt;
  const Rule& rule = rules_[index_.at(family_key(g))];
  if (g.order() == rule.jet.order()) return rule.value;
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto it = cache_->derived.find(g.code());
  if (it != cache_->derived.end()) return it->second;
  DiffPoly below = *image(Generator::jet(g.family(), g.base(), g.order() - 1));
  DiffPoly v = apply(total_x_derivative(below));
  cache_->derived.emplace(g.code(), v);
  return v;
}

DiffPoly JetSubstitution::apply(const DiffPoly& p) const {
  if (rules_.empty()) return p;
  return substitute(p, [this](const Generator& g) { return image(g); });
}

PsiDO JetSubstitution::apply(const PsiDO& a) const {
  PsiDO out(a.top(), a.window());
  for (const auto& [j, c] : a.coeffs()) out.set(j, apply(c));
  return out;
}

nlohmann::ordered_json JetSubstitution::to_json() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& r : rules_) out.push_back({{"jet", r.jet.str()}, {"value", r.value.str()}});
  return out;
}

JetSubstitution solve_linear_constraints(const PsiDO& residual, const std::vector<int>& degrees, Family family,
                                         int order, JetSubstitution table) {
  for (int deg : degrees) {
    DiffPoly r = table.apply(residual.coeff(deg));
    if (r.is_zero()) continue;
    // Count occurrences of each candidate jet; remember the linear term.
    std::map<int, int> uses;
    std::map<int, EpsScalar> linear;
    for (const auto& t : r.terms()) {
      for (auto e : t.mono) {
        Generator g = monomial_generator(e);
        if (!g.is_jet() || g.family() != family || g.order() != order) continue;
        ++uses[g.base()];
        if (t.mono.size() == 1 && monomial_exponent(e) == 1) linear[g.base()] = t.coeff;
      }
    }
    std::optional<int> pick;
    for (const auto& [base, n] : uses) {
      auto it = linear.find(base);
      if (n == 1 && it != linear.end() && it->second.is_rational()) {
        pick = base;
        break;
      }
    }
    if (!pick) {
      throw ConfigurationError("constraint at degree " + std::to_string(deg) + " has no linearly solvable jet: " +
                               r.str());
    }
    Generator g = Generator::jet(family, *pick, order);
    EpsScalar c = linear.at(*pick);
    DiffPoly rest = r - DiffPoly(g) * c;
    table.add(g, rest * EpsScalar(Rational(Rational(-1) / c.coeff(0))));
  }
  return table;
}

}  // namespace qtorus
