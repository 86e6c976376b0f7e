#ifndef QTORUS_KP_HPP
#define QTORUS_KP_HPP

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "qtorus/derivation.hpp"
#include "qtorus/psido.hpp"
#include "qtorus/report.hpp"

namespace qtorus {

/// 1 + sum_{k=1}^{depth} w_k d^{-k} with symbolic jets, window -depth.
PsiDO generic_dressing(int depth, Family family);

/// sum_i c_i i t_i d^{i-1 + shift} for the listed time indices, exact.
PsiDO gamma_operator(int horizon, int shift, const Rational& scale, bool odd_only);

/// Flow on a dressing W = 1 + sum w_k d^{-k}: d(w_k) is the coefficient of
/// d^{-k} in -(X)_- W. Jets are filled while that coefficient is certified,
/// up to `max_jet`. With `time_index`, the flow also moves t_index with speed 1.
Derivation dressing_flow(std::string name, const PsiDO& X, const PsiDO& W, Family family, int horizon, int max_jet,
                         std::optional<int> time_index = std::nullopt);

/// [d1, d2] applied coefficient-wise to a target, on the window where both
/// orders of application are certified.
PsiDO flow_commutator(const Derivation& d1, const Derivation& d2, const PsiDO& target);

/// Dressing data of the KP hierarchy: S, S^{-1}, L = S d S^{-1},
/// Gamma = sum_{i<=T} i t_i d^{i-1} and M = S Gamma S^{-1}.
class KpContext {
 public:
  static KpContext init(int T, int O, int D);
  /// Same dressing with a caller-supplied Gamma (used for negative controls).
  static KpContext with_gamma(int T, int O, int D, PsiDO gamma);

  int T() const { return T_; }
  int O() const { return O_; }
  int D() const { return D_; }
  const PsiDO& S() const { return S_; }
  const PsiDO& S_inv() const { return S_inv_; }
  const PsiDO& L() const { return L_; }
  const PsiDO& Gamma() const { return Gamma_; }
  const PsiDO& M() const { return M_; }

  /// Cached L^n and M^m.
  const PsiDO& L_power(int n) const;
  const PsiDO& M_power(int m) const;
  /// M^m L^n.
  const PsiDO& ML(int m, int n) const;

  /// Cached additional flow d_{t_{m,n}}.
  const Derivation& additional(int m, int n) const;
  /// Cached d_{t_{m,n}} L.
  const PsiDO& additional_on_L(int m, int n) const;

 private:
  KpContext(int T, int O, int D, PsiDO gamma);

  struct Cache {
    std::recursive_mutex mu;
    std::map<int, PsiDO> lpow, mpow;
    std::map<std::pair<int, int>, PsiDO> ml, flow_L;
    std::map<std::pair<int, int>, Derivation> flows;
  };

  int T_, O_, D_;
  PsiDO S_, S_inv_, L_, Gamma_, M_;
  std::shared_ptr<Cache> cache_;
};

/// (L^n)_+.
PsiDO bn(const KpContext& ctx, int n);
/// d S / d t_n = -(L^n)_- S, with t_n moving at unit speed.
Derivation sato_flow(const KpContext& ctx, int n);
/// d S / d t_{m,n} = -(M^m L^n)_- S; explicit times are untouched.
Derivation additional_flow(const KpContext& ctx, int m, int n);
/// sum_{p<=P, s<=D} m^p (n eps)^s / (p! s!) d_{t_{p,s}}.
Derivation quantum_flow(const KpContext& ctx, int m, int n, int P);
/// m^p (n eps)^s / (p! s!) with the context's eps-cap.
EpsScalar quantum_weight(int m, int n, int p, int s, int cap);

Report check_canonical(const KpContext& ctx);
Report check_flow_commutation(const std::string& name, const Derivation& d1, const Derivation& d2,
                              const PsiDO& target);
/// d_{t_n} L against [B_n, L].
Report check_lax_form(const KpContext& ctx, int n);
/// d_{t_{m,n}} L against -[(M^m L^n)_-, L].
Report check_additional_lax_form(const KpContext& ctx, int m, int n);
/// d_{t_{0,n}} and the Sato flow d_{t_n} agree on every jet both define.
Report check_sato_equivalence(const KpContext& ctx, int n);
/// [d_{t_{p,s}}, d_{t_{a,b}}] L = sum C_{alpha beta} d_{t_{alpha,beta}} L.
Report check_w_structure(const KpContext& ctx, int p, int s, int a, int b);
/// [d_{t*_{n,m}}, d_{t*_{l,k}}] L = (q^{ml} - q^{nk}) d_{t*_{n+l,m+k}} L on
/// contributions of M-degree <= P - D.
Report check_qt_relation(const KpContext& ctx, int n, int m, int l, int k, int P);

/// A family of additional flows acting on a target Lax operator; lets the
/// reductions share the W and quantum torus checks.
struct FlowFamily {
  std::function<const Derivation&(int, int)> additional;
  std::function<const PsiDO&(int, int)> additional_on_target;
  std::function<Derivation(int, int, int)> quantum;
  const PsiDO* target = nullptr;
  int D = 0;
};
void fill_w_structure(Report& r, const FlowFamily& f, int p, int s, int a, int b);
void fill_qt_relation(Report& r, const FlowFamily& f, int n, int m, int l, int k, int P);

/// Shared reporting helper: compares two operators on their common window.
/// Returns the certified degree range, or nullopt when they differ (in which
/// case failures are appended to the report).
std::optional<std::pair<int, int>> compare_on_window(Report& r, const PsiDO& lhs, const PsiDO& rhs,
                                                     const PsiDO* coverage = nullptr);

}  // namespace qtorus

#endif  // QTORUS_KP_HPP
