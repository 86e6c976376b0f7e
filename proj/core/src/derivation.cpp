#include "qtorus/derivation.hpp"

#include <string>

namespace qtorus {

namespace {

std::pair<std::uint32_t, int> jet_key(Family f, int base) { return {static_cast<std::uint32_t>(f), base}; }

}  // namespace

Derivation::Derivation(std::string name, int time_horizon) : name_(std::move(name)), horizon_(time_horizon) {}

void Derivation::set_jet_action(Family family, int base, DiffPoly action) {
  jets_[jet_key(family, base)] = std::move(action);
  cache_ = std::make_shared<Cache>();
}

void Derivation::set_time_action(int index, const Rational& value) {
  if (index < 1 || index > horizon_) {
    throw ConfigurationError("time index " + std::to_string(index) + " outside horizon " + std::to_string(horizon_));
  }
  if (sgn(value) == 0) times_.erase(index);
  else times_[index] = value;
}

void Derivation::set_normal_form(NormalForm nf) {
  nf_ = std::move(nf);
  cache_ = std::make_shared<Cache>();
}

bool Derivation::has_jet(Family family, int base) const { return jets_.count(jet_key(family, base)) != 0; }

int Derivation::jet_depth(Family family) const {
  int k = 0;
  while (has_jet(family, k + 1)) ++k;
  return k;
}

const DiffPoly& Derivation::jet_action(Family family, int base) const {
  auto it = jets_.find(jet_key(family, base));
  if (it == jets_.end()) {
    throw WindowExhausted("derivation '" + name_ + "' has no certified action on " +
                          Generator::jet(family, base).str());
  }
  return it->second;
}

Rational Derivation::time_action(int index) const {
  auto it = times_.find(index);
  return it == times_.end() ? Rational(0) : it->second;
}

DiffPoly Derivation::on_generator(const Generator& g) const {
  if (g.is_time()) {
    if (g.time_index() > horizon_) {
      throw ConfigurationError("t" + std::to_string(g.time_index()) + " lies outside the active time horizon " +
                               std::to_string(horizon_));
    }
    return DiffPoly(time_action(g.time_index()));
  }
  const DiffPoly& base = jet_action(g.family(), g.base());
  if (g.order() == 0) return base;
  std::lock_guard<std::mutex> lock(cache_->mu);
  auto it = cache_->jets.find(g.code());
  if (it != cache_->jets.end()) return it->second;
  // Build up from the highest cached lower order.
  int from = g.order() - 1;
  DiffPoly cur;
  for (; from >= 1; --from) {
    auto lower = cache_->jets.find(Generator::jet(g.family(), g.base(), from).code());
    if (lower != cache_->jets.end()) {
      cur = lower->second;
      break;
    }
  }
  if (from < 1) {
    from = 0;
    cur = base;
  }
  for (int j = from + 1; j <= g.order(); ++j) {
    cur = nf_ ? nf_(total_x_derivative(cur)) : total_x_derivative(cur);
    cache_->jets.emplace(Generator::jet(g.family(), g.base(), j).code(), cur);
  }
  return cur;
}

DiffPoly Derivation::apply(const DiffPoly& p) const {
  DiffPoly out = apply_generator_map(p, [this](const Generator& g) { return on_generator(g); });
  return nf_ ? nf_(out) : out;
}

Derivation& Derivation::operator+=(const Derivation& o) {
  if (horizon_ != o.horizon_) throw ConfigurationError("cannot add derivations over different time horizons");
  std::map<std::pair<std::uint32_t, int>, DiffPoly> merged;
  // The sum is only known where both summands are.
  for (auto& [k, v] : jets_) {
    auto it = o.jets_.find(k);
    if (it != o.jets_.end()) merged[k] = v + it->second;
  }
  jets_ = std::move(merged);
  for (const auto& [i, v] : o.times_) {
    Rational s = time_action(i) + v;
    if (sgn(s) == 0) times_.erase(i);
    else times_[i] = s;
  }
  name_ = name_ + " + " + o.name_;
  if (!nf_) nf_ = o.nf_;
  cache_ = std::make_shared<Cache>();
  return *this;
}

Derivation operator*(const EpsScalar& c, const Derivation& d) {
  Derivation r(d.name_, d.horizon_);
  r.nf_ = d.nf_;
  for (const auto& [k, v] : d.jets_) r.jets_[k] = v * c;
  if (!c.is_rational() && !d.times_.empty()) {
    throw ConfigurationError("explicit-time actions must stay rational");
  }
  for (const auto& [i, v] : d.times_) {
    Rational s = v * c.coeff(0);
    if (sgn(s) != 0) r.times_[i] = s;
  }
  return r;
}

DiffPoly apply_derivation(const Derivation& d, const DiffPoly& p) { return d.apply(p); }

DiffPoly derivation_commutator(const Derivation& d1, const Derivation& d2, const DiffPoly& p) {
  return d1.apply(d2.apply(p)) - d2.apply(d1.apply(p));
}

}  // namespace qtorus
