#include "qtorus/kp.hpp"

#include <chrono>

#include "qtorus/quantum_torus.hpp"

namespace qtorus {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Rational int_pow(long base, int e) {
  Rational r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

nlohmann::ordered_json degree_range(std::pair<int, int> r) {
  return {{"degrees", {r.first, r.second}}};
}

}  // namespace

PsiDO generic_dressing(int depth, Family family) {
  PsiDO s(0, -depth);
  s.set(0, DiffPoly(1));
  for (int k = 1; k <= depth; ++k) s.set(-k, jet(k, 0, family));
  return s;
}

PsiDO gamma_operator(int horizon, int shift, const Rational& scale, bool odd_only) {
  PsiDO g(horizon - 1 + shift, PsiDO::kExact);
  for (int i = 1; i <= horizon; ++i) {
    if (odd_only && i % 2 == 0) continue;
    g.add_to(i - 1 + shift, DiffPoly(scale * i) * time_var(i));
  }
  return g;
}

Derivation dressing_flow(std::string name, const PsiDO& X, const PsiDO& W, Family family, int horizon, int max_jet,
                         std::optional<int> time_index) {
  Derivation d(std::move(name), horizon);
  if (time_index) d.set_time_action(*time_index, 1);
  PsiDO minus = minus_part(X);
  PsiDO rhs = -compose(minus, W, -max_jet);
  for (int k = 1; k <= max_jet; ++k) {
    if (-k < rhs.window()) break;
    d.set_jet_action(family, k, rhs.coeff(-k));
  }
  return d;
}

PsiDO flow_commutator(const Derivation& d1, const Derivation& d2, const PsiDO& target) {
  PsiDO a = apply_derivation(d1, apply_derivation(d2, target));
  PsiDO b = apply_derivation(d2, apply_derivation(d1, target));
  return a - b;
}

KpContext::KpContext(int T, int O, int D, PsiDO gamma)
    : T_(T), O_(O), D_(D), Gamma_(std::move(gamma)), cache_(std::make_shared<Cache>()) {
  if (T < 1) throw ConfigurationError("time horizon T must be at least 1");
  if (O < 2) throw ConfigurationError("truncation depth O must be at least 2");
  if (D < 0) throw ConfigurationError("eps cap D must be non-negative");
  S_ = generic_dressing(O, Family::kOmega);
  S_inv_ = invert_unit(S_, O);
  const PsiDO d = PsiDO::d(1);
  L_ = compose({&S_, &d, &S_inv_});
  M_ = compose({&S_, &Gamma_, &S_inv_});
}

KpContext KpContext::init(int T, int O, int D) {
  return KpContext(T, O, D, gamma_operator(T, 0, 1, false));
}

KpContext KpContext::with_gamma(int T, int O, int D, PsiDO gamma) { return KpContext(T, O, D, std::move(gamma)); }

const PsiDO& KpContext::L_power(int n) const {
  if (n < 0) throw ConfigurationError("negative power of L");
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto it = cache_->lpow.find(n);
  if (it != cache_->lpow.end()) return it->second;
  PsiDO p = n == 0 ? PsiDO::identity() : (n == 1 ? L_ : compose(L_power(n - 1), L_));
  return cache_->lpow.emplace(n, std::move(p)).first->second;
}

const PsiDO& KpContext::M_power(int m) const {
  if (m < 0) throw ConfigurationError("negative power of M");
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto it = cache_->mpow.find(m);
  if (it != cache_->mpow.end()) return it->second;
  PsiDO p = m == 0 ? PsiDO::identity() : (m == 1 ? M_ : compose(M_power(m - 1), M_));
  return cache_->mpow.emplace(m, std::move(p)).first->second;
}

const PsiDO& KpContext::ML(int m, int n) const {
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto key = std::make_pair(m, n);
  auto it = cache_->ml.find(key);
  if (it != cache_->ml.end()) return it->second;
  PsiDO p = m == 0 ? L_power(n) : (n == 0 ? M_power(m) : compose(M_power(m), L_power(n)));
  return cache_->ml.emplace(key, std::move(p)).first->second;
}

const Derivation& KpContext::additional(int m, int n) const {
  if (m < 0 || n < 0) throw ConfigurationError("additional flow indices must be non-negative");
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto key = std::make_pair(m, n);
  auto it = cache_->flows.find(key);
  if (it != cache_->flows.end()) return it->second;
  std::string name = "d/dt_{" + std::to_string(m) + "," + std::to_string(n) + "}";
  Derivation d = dressing_flow(name, ML(m, n), S_, Family::kOmega, T_, O_);
  return cache_->flows.emplace(key, std::move(d)).first->second;
}

const PsiDO& KpContext::additional_on_L(int m, int n) const {
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto key = std::make_pair(m, n);
  auto it = cache_->flow_L.find(key);
  if (it != cache_->flow_L.end()) return it->second;
  PsiDO v = apply_derivation(additional(m, n), L_);
  return cache_->flow_L.emplace(key, std::move(v)).first->second;
}

PsiDO bn(const KpContext& ctx, int n) {
  if (n < 1 || n > ctx.O()) throw ConfigurationError("B_n needs 1 <= n <= O");
  return plus_part(ctx.L_power(n));
}

Derivation sato_flow(const KpContext& ctx, int n) {
  if (n < 1 || n > ctx.T()) {
    throw ConfigurationError("Sato flow t_" + std::to_string(n) + " exceeds the time horizon " + std::to_string(ctx.T()));
  }
  return dressing_flow("d/dt_" + std::to_string(n), ctx.L_power(n), ctx.S(), Family::kOmega, ctx.T(), ctx.O(), n);
}

Derivation additional_flow(const KpContext& ctx, int m, int n) { return ctx.additional(m, n); }

EpsScalar quantum_weight(int m, int n, int p, int s, int cap) {
  Rational c = int_pow(m, p) * int_pow(n, s) / (factorial(p) * factorial(s));
  return EpsScalar::monomial(c, s, cap);
}

Derivation quantum_flow(const KpContext& ctx, int m, int n, int P) {
  if (m < 0 || n < 0 || P < 0) throw ConfigurationError("quantum flow indices must be non-negative");
  std::optional<Derivation> sum;
  for (int p = 0; p <= P; ++p) {
    for (int s = 0; s <= ctx.D(); ++s) {
      EpsScalar w = quantum_weight(m, n, p, s, ctx.D());
      if (w.is_zero()) continue;
      Derivation term = w * ctx.additional(p, s);
      if (sum) *sum += term;
      else sum = std::move(term);
    }
  }
  std::string name = "d/dt*_{" + std::to_string(m) + "," + std::to_string(n) + "}";
  if (!sum) return Derivation(name, ctx.T());
  sum->set_name(name);
  return *sum;
}

std::optional<std::pair<int, int>> compare_on_window(Report& r, const PsiDO& lhs, const PsiDO& rhs,
                                                     const PsiDO* coverage) {
  auto [lo, hi] = common_range(lhs, rhs);
  if (lo == PsiDO::kExact) lo = std::min(lhs.lowest_stored(), rhs.lowest_stored());
  if (lo > hi) {
    r.fail("no certified degree: window " + std::to_string(lo) + " above top " + std::to_string(hi));
    return std::nullopt;
  }
  bool ok = true;
  for (int j = hi; j >= lo; --j) {
    DiffPoly diff = lhs.coeff(j) - rhs.coeff(j);
    if (!diff.is_zero()) {
      r.fail("degree " + std::to_string(j) + ": residual " + diff.str());
      ok = false;
    }
  }
  if (!ok) return std::nullopt;
  if (coverage) {
    int nontrivial = 0;
    for (int j = hi; j >= std::max(lo, coverage->window()); --j) {
      if (!coverage->coeff(j).is_constant()) ++nontrivial;
    }
    if (nontrivial == 0) {
      r.fail("certified range [" + std::to_string(lo) + ", " + std::to_string(hi) +
             "] contains no non-constant coefficient of the target");
      return std::nullopt;
    }
  }
  return std::make_pair(lo, hi);
}

Report check_canonical(const KpContext& ctx) {
  auto t0 = Clock::now();
  Report r;
  r.check = "kp.canonical";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"D", ctx.D()}};
  PsiDO c = commutator(ctx.L(), ctx.M());
  auto range = compare_on_window(r, c, PsiDO::identity().truncated(c.window()));
  if (range) r.details.push_back("[L,M] = 1 on degrees " + std::to_string(range->first) + ".." + std::to_string(range->second));
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_flow_commutation(const std::string& name, const Derivation& d1, const Derivation& d2,
                              const PsiDO& target) {
  auto t0 = Clock::now();
  Report r;
  r.check = name;
  r.params = {{"d1", d1.name()}, {"d2", d2.name()}};
  PsiDO c = flow_commutator(d1, d2, target);
  PsiDO zero(c.top(), c.window());
  auto range = compare_on_window(r, c, zero, &target);
  if (range) {
    r.status = Status::kCertifiedRange;
    r.certified_range = degree_range(*range);
    r.details.push_back("[" + d1.name() + ", " + d2.name() + "] vanishes on degrees " + std::to_string(range->first) +
                        ".." + std::to_string(range->second));
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_lax_form(const KpContext& ctx, int n) {
  auto t0 = Clock::now();
  Report r;
  r.check = "kp.lax";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"n", n}};
  PsiDO lhs = apply_derivation(sato_flow(ctx, n), ctx.L());
  PsiDO rhs = commutator(bn(ctx, n), ctx.L());
  auto range = compare_on_window(r, lhs, rhs, &ctx.L());
  if (range) {
    r.status = Status::kCertifiedRange;
    r.certified_range = degree_range(*range);
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_additional_lax_form(const KpContext& ctx, int m, int n) {
  auto t0 = Clock::now();
  Report r;
  r.check = "kp.additional_lax";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"m", m}, {"n", n}};
  PsiDO lhs = ctx.additional_on_L(m, n);
  PsiDO rhs = -commutator(minus_part(ctx.ML(m, n)), ctx.L());
  auto range = compare_on_window(r, lhs, rhs, &ctx.L());
  if (range) {
    r.status = Status::kCertifiedRange;
    r.certified_range = degree_range(*range);
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_sato_equivalence(const KpContext& ctx, int n) {
  auto t0 = Clock::now();
  Report r;
  r.check = "kp.sato_equivalence";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"n", n}};
  const Derivation& a = ctx.additional(0, n);
  Derivation s = sato_flow(ctx, n);
  int depth = std::min(a.jet_depth(Family::kOmega), s.jet_depth(Family::kOmega));
  if (depth == 0) r.fail("no jet is certified for both flows");
  for (int k = 1; k <= depth; ++k) {
    DiffPoly diff = a.jet_action(Family::kOmega, k) - s.jet_action(Family::kOmega, k);
    if (!diff.is_zero()) r.fail("w" + std::to_string(k) + ": " + diff.str());
  }
  if (r.status == Status::kPass) {
    r.status = Status::kCertifiedRange;
    r.certified_range = nlohmann::ordered_json{{"jets", {1, depth}}};
    r.details.push_back("jet actions agree on w1..w" + std::to_string(depth));
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

static FlowFamily kp_family(const KpContext& ctx) {
  FlowFamily f;
  f.additional = [&ctx](int m, int n) -> const Derivation& { return ctx.additional(m, n); };
  f.additional_on_target = [&ctx](int m, int n) -> const PsiDO& { return ctx.additional_on_L(m, n); };
  f.quantum = [&ctx](int m, int n, int P) { return quantum_flow(ctx, m, n, P); };
  f.target = &ctx.L();
  f.D = ctx.D();
  return f;
}

void fill_w_structure(Report& r, const FlowFamily& f, int p, int s, int a, int b) {
  PsiDO lhs = flow_commutator(f.additional(p, s), f.additional(a, b), *f.target);
  auto table = w_structure_constants(p, s, a, b);
  PsiDO rhs = PsiDO::zero();
  for (const auto& [ab, c] : table) {
    rhs += f.additional_on_target(ab.first, ab.second) * EpsScalar(c);
    r.details.push_back("C(" + std::to_string(ab.first) + "," + std::to_string(ab.second) + ") = " + c.get_str());
  }
  if (table.empty()) r.details.push_back("all structure constants vanish");
  auto range = compare_on_window(r, lhs, rhs, f.target);
  if (range) {
    r.status = Status::kCertifiedRange;
    r.certified_range = degree_range(*range);
  }
}

Report check_w_structure(const KpContext& ctx, int p, int s, int a, int b) {
  auto t0 = Clock::now();
  Report r;
  r.check = "kp.w_structure";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"p", p}, {"s", s}, {"a", a}, {"b", b}};
  fill_w_structure(r, kp_family(ctx), p, s, a, b);
  r.elapsed_ms = ms_since(t0);
  return r;
}

void fill_qt_relation(Report& r, const FlowFamily& f, int n, int m, int l, int k, int P) {
  const int D = f.D;
  const int A = P - D;
  if (A < 0) {
    r.status = Status::kError;
    r.details.push_back("P must be at least D for a non-empty certified range");
    return;
  }

  PsiDO lhs = flow_commutator(f.quantum(n, m, P), f.quantum(l, k, P), *f.target);

  // Remove the contributions of M-degree alpha > P - D: those are incomplete
  // once the p- and a-sums are cut at P.
  PsiDO tail = PsiDO::zero();
  for (int p = 0; p <= P; ++p) {
    for (int s = 0; s <= D; ++s) {
      EpsScalar w1 = quantum_weight(n, m, p, s, D);
      if (w1.is_zero()) continue;
      for (int a = 0; a <= P; ++a) {
        for (int b = 0; b <= D; ++b) {
          EpsScalar w = w1 * quantum_weight(l, k, a, b, D);
          if (w.is_zero()) continue;
          for (const auto& [ab, c] : w_structure_constants(p, s, a, b)) {
            if (ab.first <= A) continue;
            EpsScalar wc = w * EpsScalar(c);
            if (wc.is_zero()) continue;
            tail += f.additional_on_target(ab.first, ab.second) * wc;
          }
        }
      }
    }
  }
  PsiDO restricted = lhs - tail;

  PsiDO star = PsiDO::zero();
  for (int alpha = 0; alpha <= A; ++alpha) {
    for (int beta = 0; beta <= D; ++beta) {
      EpsScalar w = quantum_weight(n + l, m + k, alpha, beta, D);
      if (w.is_zero()) continue;
      star += f.additional_on_target(alpha, beta) * w;
    }
  }
  EpsScalar pref = eps_q_power(Rational(m) * l, D) - eps_q_power(Rational(n) * k, D);
  PsiDO rhs = star * pref;

  r.details.push_back("prefactor q^{ml} - q^{nk} = " + pref.str());
  auto range = compare_on_window(r, restricted, rhs, f.target);
  if (range) {
    r.status = Status::kCertifiedRange;
    r.certified_range = nlohmann::ordered_json{{"m_degree_max", A}, {"eps_degree_max", D}, {"degrees", {range->first, range->second}}};
  } else {
    Report flipped;
    if (compare_on_window(flipped, restricted, -rhs, f.target)) {
      r.details.push_back("the relation holds with the opposite prefactor q^{nk} - q^{ml}");
    }
  }
}

Report check_qt_relation(const KpContext& ctx, int n, int m, int l, int k, int P) {
  auto t0 = Clock::now();
  Report r;
  r.check = "kp.qt_relation";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"D", ctx.D()}, {"P", P}, {"n", n}, {"m", m}, {"l", l}, {"k", k}};
  fill_qt_relation(r, kp_family(ctx), n, m, l, k, P);
  r.elapsed_ms = ms_since(t0);
  return r;
}

}  // namespace qtorus
