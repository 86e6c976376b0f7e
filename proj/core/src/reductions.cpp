#include "qtorus/reductions.hpp"

#include <chrono>

#include "qtorus/quantum_torus.hpp"

namespace qtorus {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string pair_name(const std::string& prefix, int a, int b) {
  return prefix + "{" + std::to_string(a) + "," + std::to_string(b) + "}";
}

// Pass when exact, otherwise certified on the compared degrees.
void mark_range(Report& r, const PsiDO& compared, std::optional<std::pair<int, int>> range) {
  if (!range) return;
  if (compared.is_exact()) return;
  r.status = Status::kCertifiedRange;
  r.certified_range = nlohmann::ordered_json{{"degrees", {range->first, range->second}}};
}

Derivation sum_flows(const std::string& name, int horizon, int m, int n, int P, int D,
                     const std::function<const Derivation&(int, int)>& flow) {
  std::optional<Derivation> sum;
  for (int p = 0; p <= P; ++p) {
    for (int s = 0; s <= D; ++s) {
      EpsScalar w = quantum_weight(m, n, p, s, D);
      if (w.is_zero()) continue;
      Derivation term = w * flow(p, s);
      if (sum) *sum += term;
      else sum = std::move(term);
    }
  }
  if (!sum) return Derivation(name, horizon);
  sum->set_name(name);
  return *sum;
}

}  // namespace

Derivation reduce_derivation(const Derivation& d, Family family, std::shared_ptr<const JetSubstitution> table) {
  Derivation r(d.name(), d.time_horizon());
  for (int i = 1; i <= d.time_horizon(); ++i) r.set_time_action(i, d.time_action(i));
  for (int k = 1; k <= d.jet_depth(family); ++k) r.set_jet_action(family, k, table->apply(d.jet_action(family, k)));
  if (!table->empty()) {
    r.set_normal_form([table](const DiffPoly& p) { return table->apply(p); });
  }
  return r;
}

// KdV

KdvContext::KdvContext(KpContext kp, std::shared_ptr<const JetSubstitution> table)
    : kp_(std::move(kp)), table_(std::move(table)), cache_(std::make_shared<Cache>()) {
  L2_generic_ = kp_.L_power(2);
  S_ = reduce(kp_.S());
  L2_ = reduce(L2_generic_);
  M_ = reduce(kp_.M());
}

KdvContext KdvContext::init(int T, int O, int D, bool reduced) {
  if (T < 1 || T % 2 == 0) throw ConfigurationError("the KdV time horizon T must be odd and positive");
  KpContext kp = KpContext::with_gamma(T, O, D, gamma_operator(T, -1, Rational(1, 2), true));
  auto table = std::make_shared<JetSubstitution>();
  if (reduced) {
    const PsiDO& l2 = kp.L_power(2);
    std::vector<int> degrees;
    for (int j = -1; j >= l2.window(); --j) degrees.push_back(j);
    *table = solve_linear_constraints(l2, degrees, Family::kOmega, 1);
  }
  return KdvContext(std::move(kp), std::move(table));
}

const Derivation& KdvContext::additional(int m, int j) const {
  if (m < 0 || j < 0) throw ConfigurationError("additional flow indices must be non-negative");
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto key = std::make_pair(m, j);
  auto it = cache_->flows.find(key);
  if (it != cache_->flows.end()) return it->second;
  Derivation d = reduce_derivation(kp_.additional(m, j), Family::kOmega, table_);
  return cache_->flows.emplace(key, std::move(d)).first->second;
}

Derivation kdv_sato_flow(const KdvContext& ctx, int n) {
  if (n % 2 == 0) throw ConfigurationError("KdV flows are indexed by odd times");
  return reduce_derivation(sato_flow(ctx.generic(), n), Family::kOmega, ctx.table());
}

Derivation kdv_additional_flow(const KdvContext& ctx, int m, int j) { return ctx.additional(m, j); }

Derivation kdv_quantum_flow(const KdvContext& ctx, int m, int n, int P) {
  if (m < 0 || n < 0 || P < 0) throw ConfigurationError("quantum flow indices must be non-negative");
  return sum_flows(pair_name("d/dt*_", m, n), ctx.T(), m, n, P, ctx.D(),
                   [&ctx](int p, int s) -> const Derivation& { return ctx.additional(p, 2 * s); });
}

Report check_kdv_canonical(const KdvContext& ctx) {
  auto t0 = Clock::now();
  Report r;
  r.check = "kdv.canonical";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"D", ctx.D()}};
  PsiDO c = ctx.reduce(commutator(ctx.generic().L_power(2), ctx.generic().M()));
  auto range = compare_on_window(r, c, PsiDO::identity().truncated(c.window()));
  if (range) r.details.push_back("[L2,M] = 1 on degrees " + std::to_string(range->first) + ".." + std::to_string(range->second));
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_form_preservation(const KdvContext& ctx, const Derivation& d) {
  auto t0 = Clock::now();
  Report r;
  r.check = "kdv.form_preservation";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"D", ctx.D()}, {"flow", d.name()}};
  std::vector<int> bad;
  int lowest = 0;
  try {
    PsiDO v = ctx.reduce(apply_derivation(d, ctx.L2_generic()));
    lowest = v.window();
    for (const auto& [j, c] : v.coeffs()) {
      if (j != 0 && !c.is_zero()) bad.push_back(j);
    }
  } catch (const WindowExhausted& e) {
    r.status = Status::kError;
    r.details.push_back(e.what());
    r.elapsed_ms = ms_since(t0);
    return r;
  }
  r.status = Status::kRecorded;
  if (bad.empty()) {
    r.details.push_back("preserved");
    r.details.push_back("d(L2) is a function on degrees " + std::to_string(lowest) + "..2");
  } else {
    r.details.push_back("not preserved");
    std::string list;
    for (auto it = bad.rbegin(); it != bad.rend(); ++it) list += (list.empty() ? "" : ", ") + std::to_string(*it);
    r.details.push_back("offending degrees: " + list);
  }
  r.elapsed_ms = ms_since(t0);
  return r;
}

// BKP

JetSubstitution solve_b_constraints(int order, int depth) {
  if (order < 0 || order >= depth) throw ConfigurationError("solve_b_constraints needs 0 <= order < depth");
  if (order == 0) return {};
  PsiDO phi = generic_dressing(depth, Family::kOmegaBar);
  const PsiDO d = PsiDO::d(1);
  PsiDO residual = compose(adjoint(phi), compose(d, phi)) - d;
  std::vector<int> degrees;
  for (int j = -1; j >= -order; --j) degrees.push_back(j);
  return solve_linear_constraints(residual, degrees, Family::kOmegaBar, 0);
}

BkpContext::BkpContext(int T, int O, int D, bool constrained)
    : T_(T), O_(O), D_(D), cache_(std::make_shared<Cache>()) {
  if (T < 1 || T % 2 == 0) throw ConfigurationError("the BKP time horizon T must be odd and positive");
  if (O < 2) throw ConfigurationError("truncation depth O must be at least 2");
  if (D < 0) throw ConfigurationError("eps cap D must be non-negative");
  const PsiDO d = PsiDO::d(1), dinv = PsiDO::d(-1);
  gen_.Phi = generic_dressing(O, Family::kOmegaBar);
  gen_.Phi_inv = invert_unit(gen_.Phi, O);
  gen_.L = compose({&gen_.Phi, &d, &gen_.Phi_inv});
  gen_.L_inv = compose({&gen_.Phi, &dinv, &gen_.Phi_inv});
  Gamma_ = gamma_operator(T, 0, 1, true);
  gen_.M = compose({&gen_.Phi, &Gamma_, &gen_.Phi_inv});
  table_ = std::make_shared<JetSubstitution>(constrained ? solve_b_constraints(O - 1, O) : JetSubstitution{});
  Phi_ = reduce(gen_.Phi);
  Phi_inv_ = reduce(gen_.Phi_inv);
  L_ = reduce(gen_.L);
  L_inv_ = reduce(gen_.L_inv);
  M_ = reduce(gen_.M);
}

BkpContext BkpContext::init(int T, int O, int D, bool constrained) { return BkpContext(T, O, D, constrained); }

const PsiDO& BkpContext::L_power(int n) const {
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto it = cache_->lpow.find(n);
  if (it != cache_->lpow.end()) return it->second;
  PsiDO p;
  if (n == 0) p = PsiDO::identity();
  else if (n == 1) p = gen_.L;
  else if (n == -1) p = gen_.L_inv;
  else if (n > 1) p = compose(L_power(n - 1), gen_.L);
  else p = compose(L_power(n + 1), gen_.L_inv);
  return cache_->lpow.emplace(n, std::move(p)).first->second;
}

const PsiDO& BkpContext::M_power(int m) const {
  if (m < 0) throw ConfigurationError("negative power of M");
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto it = cache_->mpow.find(m);
  if (it != cache_->mpow.end()) return it->second;
  PsiDO p = m == 0 ? PsiDO::identity() : (m == 1 ? gen_.M : compose(M_power(m - 1), gen_.M));
  return cache_->mpow.emplace(m, std::move(p)).first->second;
}

const PsiDO& BkpContext::B_generic(int m, int n) const {
  if (m < 0 || n < 0) throw ConfigurationError("B_{mn} needs m, n >= 0");
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto key = std::make_pair(m, n);
  auto it = cache_->b_generic.find(key);
  if (it != cache_->b_generic.end()) return it->second;
  const PsiDO& mm = M_power(m);
  PsiDO first = compose(mm, L_power(n));
  PsiDO second = compose({&L_power(n - 1), &mm, &gen_.L});
  PsiDO b = n % 2 == 0 ? first - second : first + second;
  return cache_->b_generic.emplace(key, std::move(b)).first->second;
}

const PsiDO& BkpContext::B(int m, int n) const {
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto key = std::make_pair(m, n);
  auto it = cache_->b.find(key);
  if (it != cache_->b.end()) return it->second;
  return cache_->b.emplace(key, reduce(B_generic(m, n))).first->second;
}

const Derivation& BkpContext::additional(int m, int n) const {
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto key = std::make_pair(m, n);
  auto it = cache_->flows.find(key);
  if (it != cache_->flows.end()) return it->second;
  Derivation g = dressing_flow(pair_name("d/dt_", m, n), B_generic(m, n), gen_.Phi, Family::kOmegaBar, T_, O_);
  return cache_->flows.emplace(key, reduce_derivation(g, Family::kOmegaBar, table_)).first->second;
}

const PsiDO& BkpContext::additional_on_L(int m, int n) const {
  std::lock_guard<std::recursive_mutex> lock(cache_->mu);
  auto key = std::make_pair(m, n);
  auto it = cache_->flow_L.find(key);
  if (it != cache_->flow_L.end()) return it->second;
  PsiDO v = apply_derivation(additional(m, n), L_);
  return cache_->flow_L.emplace(key, std::move(v)).first->second;
}

Derivation bkp_sato_flow(const BkpContext& ctx, int n) {
  if (n < 1 || n > ctx.T() || n % 2 == 0) {
    throw ConfigurationError("BKP Sato flow t_" + std::to_string(n) + " needs an odd index <= " + std::to_string(ctx.T()));
  }
  PsiDO ln = ctx.L_generic();
  for (int i = 1; i < n; ++i) ln = compose(ln, ctx.L_generic());
  // The generic dressing is rebuilt from the context's depth.
  PsiDO phi = generic_dressing(ctx.O(), Family::kOmegaBar);
  Derivation g = dressing_flow("d/dt_" + std::to_string(n), ln, phi, Family::kOmegaBar, ctx.T(), ctx.O(), n);
  return reduce_derivation(g, Family::kOmegaBar, ctx.table());
}

Derivation bkp_additional_flow(const BkpContext& ctx, int m, int n) { return ctx.additional(m, n); }

Derivation bkp_quantum_flow(const BkpContext& ctx, int m, int n, int P) {
  if (m < 0 || n < 0 || P < 0) throw ConfigurationError("quantum flow indices must be non-negative");
  return sum_flows(pair_name("d/dt*_", m, n), ctx.T(), m, n, P, ctx.D(),
                   [&ctx](int p, int s) -> const Derivation& { return ctx.additional(p, s); });
}

PsiDO build_Bmn(const BkpContext& ctx, int m, int n) { return ctx.B(m, n); }

PsiDO build_Dmn(const BkpContext& ctx, int m, int n, int P) {
  if (P < 0) throw ConfigurationError("P must be non-negative");
  PsiDO sum = PsiDO::zero();
  for (int p = 0; p <= P; ++p) {
    for (int s = 0; s <= ctx.D(); ++s) {
      EpsScalar w = quantum_weight(m, n, p, s, ctx.D());
      if (!w.is_zero()) sum += ctx.B(p, s) * w;
    }
  }
  return sum;
}

Report check_btype(const PsiDO& X, const JetSubstitution& table, const std::string& label) {
  auto t0 = Clock::now();
  Report r;
  r.check = "bkp.btype";
  r.params = {{"operator", label}};
  const PsiDO d = PsiDO::d(1), dinv = PsiDO::d(-1);
  // An exact operator with jets needs a floor for the d^{-1} expansion.
  std::optional<int> floor;
  if (X.is_exact() && !X.coeffs().empty()) floor = X.lowest_stored() - 8;
  PsiDO conj = compose(compose(d, X), dinv, floor);
  PsiDO v = table.apply(adjoint(X, floor) + conj);
  PsiDO zero(v.top(), v.window());
  mark_range(r, v, compare_on_window(r, v, zero));
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_bkp_canonical(const BkpContext& ctx) {
  auto t0 = Clock::now();
  Report r;
  r.check = "bkp.canonical";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"D", ctx.D()}};
  PsiDO c = ctx.reduce(commutator(ctx.L(), ctx.M()));
  auto range = compare_on_window(r, c, PsiDO::identity().truncated(c.window()));
  if (range) r.details.push_back("[L_B,M_B] = 1 on degrees " + std::to_string(range->first) + ".." + std::to_string(range->second));
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_dressing_condition(const BkpContext& ctx) {
  auto t0 = Clock::now();
  Report r;
  r.check = "bkp.dressing";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"constrained", ctx.constrained()}};
  const PsiDO d = PsiDO::d(1);
  PsiDO lhs = ctx.reduce(compose(adjoint(ctx.Phi()), compose(d, ctx.Phi())));
  mark_range(r, lhs, compare_on_window(r, lhs, d.truncated(lhs.window())));
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_mb_lemma(const BkpContext& ctx) {
  auto t0 = Clock::now();
  Report r;
  r.check = "bkp.mb_lemma";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"constrained", ctx.constrained()}};
  const PsiDO d = PsiDO::d(1), dinv = PsiDO::d(-1);
  PsiDO lhs = ctx.reduce(adjoint(ctx.M()));
  PsiDO rhs = ctx.reduce(compose({&d, &ctx.L_inv(), &ctx.M(), &ctx.L(), &dinv}));
  mark_range(r, lhs, compare_on_window(r, lhs, rhs, &ctx.M()));
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_btype_preservation(const BkpContext& ctx, const Derivation& d) {
  auto t0 = Clock::now();
  PsiDO v = ctx.reduce(apply_derivation(d, ctx.L_generic()));
  Report r = check_btype(v, ctx.substitution(), d.name() + " L_B");
  r.check = "bkp.btype_preservation";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"flow", d.name()}};
  r.elapsed_ms = ms_since(t0);
  return r;
}

namespace {

FlowFamily bkp_family(const BkpContext& ctx) {
  FlowFamily f;
  f.additional = [&ctx](int m, int n) -> const Derivation& { return ctx.additional(m, n); };
  f.additional_on_target = [&ctx](int m, int n) -> const PsiDO& { return ctx.additional_on_L(m, n); };
  f.quantum = [&ctx](int m, int n, int P) { return bkp_quantum_flow(ctx, m, n, P); };
  f.target = &ctx.L();
  f.D = ctx.D();
  return f;
}

}  // namespace

Report check_bkp_w_structure(const BkpContext& ctx, int p, int s, int a, int b) {
  auto t0 = Clock::now();
  Report r;
  r.check = "bkp.w_structure";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"p", p}, {"s", s}, {"a", a}, {"b", b}};
  fill_w_structure(r, bkp_family(ctx), p, s, a, b);
  r.elapsed_ms = ms_since(t0);
  return r;
}

Report check_bkp_qt_relation(const BkpContext& ctx, int n, int m, int l, int k, int P) {
  auto t0 = Clock::now();
  Report r;
  r.check = "bkp.qt_relation";
  r.params = {{"T", ctx.T()}, {"O", ctx.O()}, {"D", ctx.D()}, {"P", P}, {"n", n}, {"m", m}, {"l", l}, {"k", k}};
  fill_qt_relation(r, bkp_family(ctx), n, m, l, k, P);
  r.elapsed_ms = ms_since(t0);
  return r;
}

}  // namespace qtorus
