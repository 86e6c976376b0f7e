#ifndef QTORUS_REDUCTIONS_HPP
#define QTORUS_REDUCTIONS_HPP

#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "qtorus/kp.hpp"
#include "qtorus/substitution.hpp"

namespace qtorus {

/// Copies a derivation into a reduced ring: jet actions are put in normal
/// form and the table becomes the derivation's normal form.
Derivation reduce_derivation(const Derivation& d, Family family, std::shared_ptr<const JetSubstitution> table);

/// KdV reduction of a KP dressing.
///
/// The dressing S is generic, and (S d^2 S^{-1})_- = 0 is imposed by
/// eliminating w_{k+1}' at degree -k. All operators are computed over the
/// generic jets and then put in normal form; the table is a differential
/// ring homomorphism, so this equals computing in the reduced ring.
class KdvContext {
 public:
  /// `reduced = false` keeps the bare dressing (negative controls).
  static KdvContext init(int T, int O, int D, bool reduced = true);

  int T() const { return kp_.T(); }
  int O() const { return kp_.O(); }
  int D() const { return kp_.D(); }
  const JetSubstitution& substitution() const { return *table_; }
  std::shared_ptr<const JetSubstitution> table() const { return table_; }

  /// Generic dressing data: S, L = S d S^{-1} (the square root of L2),
  /// Gamma_kdv and M = S Gamma_kdv S^{-1}.
  const KpContext& generic() const { return kp_; }
  PsiDO reduce(const PsiDO& a) const { return table_->apply(a); }

  const PsiDO& S() const { return S_; }
  const PsiDO& L2() const { return L2_; }
  const PsiDO& L2_generic() const { return L2_generic_; }
  const PsiDO& M() const { return M_; }
  const PsiDO& Gamma() const { return kp_.Gamma(); }

  /// d S / d t_{m,j} = -(M^m L^{j/2})_- S in the reduced ring.
  const Derivation& additional(int m, int j) const;

 private:
  KdvContext(KpContext kp, std::shared_ptr<const JetSubstitution> table);

  struct Cache {
    std::recursive_mutex mu;
    std::map<std::pair<int, int>, Derivation> flows;
  };

  KpContext kp_;
  std::shared_ptr<const JetSubstitution> table_;
  PsiDO S_, L2_, L2_generic_, M_;
  std::shared_ptr<Cache> cache_;
};

/// d S / d t_n = -(L2^{n/2})_- S for odd n <= T.
Derivation kdv_sato_flow(const KdvContext& ctx, int n);
/// d_{t_{m,j}} with the half-integer index convention: (0, k) is the Sato flow.
Derivation kdv_additional_flow(const KdvContext& ctx, int m, int j);
/// sum_{p<=P, s<=D} m^p (n eps)^s / (p! s!) d_{t_{p,2s}}: the resummed
/// -(e^{mM} q^{n L2})_- S.
Derivation kdv_quantum_flow(const KdvContext& ctx, int m, int n, int P);

Report check_kdv_canonical(const KdvContext& ctx);
/// Probe: is d(L2) again of the form d^2 + u? Always "recorded"; the first
/// detail is "preserved" or "not preserved".
Report check_form_preservation(const KdvContext& ctx, const Derivation& d);

/// BKP dressing Phi = 1 + sum wb_k d^{-k} with Phi^* d Phi = d imposed by
/// eliminating the even jets, L_B = Phi d Phi^{-1}, Gamma_B over odd times and
/// M_B = Phi Gamma_B Phi^{-1}.
class BkpContext {
 public:
  static BkpContext init(int T, int O, int D, bool constrained = true);

  int T() const { return T_; }
  int O() const { return O_; }
  int D() const { return D_; }
  bool constrained() const { return !table_->empty(); }
  const JetSubstitution& substitution() const { return *table_; }
  std::shared_ptr<const JetSubstitution> table() const { return table_; }
  PsiDO reduce(const PsiDO& a) const { return table_->apply(a); }

  const PsiDO& Phi() const { return Phi_; }
  const PsiDO& Phi_inv() const { return Phi_inv_; }
  const PsiDO& L() const { return L_; }
  const PsiDO& L_inv() const { return L_inv_; }
  const PsiDO& Gamma() const { return Gamma_; }
  const PsiDO& M() const { return M_; }
  /// Generic (unreduced) Lax operator, for flow probes.
  const PsiDO& L_generic() const { return gen_.L; }

  /// B_{mn} = M^m L^n - (-1)^n L^{n-1} M^m L, reduced.
  const PsiDO& B(int m, int n) const;
  /// d Phi / d t_{m,n} = -(B_{mn})_- Phi.
  const Derivation& additional(int m, int n) const;
  /// Cached d_{t_{m,n}} L_B.
  const PsiDO& additional_on_L(int m, int n) const;

 private:
  struct Generic {
    PsiDO Phi, Phi_inv, L, L_inv, M;
  };
  struct Cache {
    std::recursive_mutex mu;
    std::map<int, PsiDO> lpow, mpow;
    std::map<std::pair<int, int>, PsiDO> b_generic, b, flow_L;
    std::map<std::pair<int, int>, Derivation> flows;
  };

  BkpContext(int T, int O, int D, bool constrained);
  const PsiDO& L_power(int n) const;
  const PsiDO& M_power(int m) const;
  const PsiDO& B_generic(int m, int n) const;

  int T_, O_, D_;
  Generic gen_;
  std::shared_ptr<const JetSubstitution> table_;
  PsiDO Phi_, Phi_inv_, L_, L_inv_, Gamma_, M_;
  std::shared_ptr<Cache> cache_;
};

/// Elimination table for Phi^* d Phi = d through degree -order.
JetSubstitution solve_b_constraints(int order, int depth);

/// d Phi / d t_n = -(L_B^n)_- Phi for odd n <= T.
Derivation bkp_sato_flow(const BkpContext& ctx, int n);
Derivation bkp_additional_flow(const BkpContext& ctx, int m, int n);
/// sum_{p<=P, s<=D} m^p (n eps)^s / (p! s!) d_{t_{p,s}}, generated by D_{mn}.
Derivation bkp_quantum_flow(const BkpContext& ctx, int m, int n, int P);

PsiDO build_Bmn(const BkpContext& ctx, int m, int n);
/// sum_{p<=P, s<=D} m^p (n eps)^s / (p! s!) B_{ps}.
PsiDO build_Dmn(const BkpContext& ctx, int m, int n, int P);

/// adjoint(X) + d X d^{-1} = 0 on the window, in the table's normal form.
Report check_btype(const PsiDO& X, const JetSubstitution& table, const std::string& label);
Report check_bkp_canonical(const BkpContext& ctx);
/// Phi^* d Phi = d on the window.
Report check_dressing_condition(const BkpContext& ctx);
/// M_B^* = d L_B^{-1} M_B L_B d^{-1}.
Report check_mb_lemma(const BkpContext& ctx);
/// d(L_B) is again B-type, with d acting on the generic Lax operator.
Report check_btype_preservation(const BkpContext& ctx, const Derivation& d);
/// The KP structure constants against [d_{t_{p,s}}, d_{t_{a,b}}] L_B.
Report check_bkp_w_structure(const BkpContext& ctx, int p, int s, int a, int b);
/// Quantum torus relation for the BKP flows, on the KP range policy.
Report check_bkp_qt_relation(const BkpContext& ctx, int n, int m, int l, int k, int P);

}  // namespace qtorus

#endif  // QTORUS_REDUCTIONS_HPP
