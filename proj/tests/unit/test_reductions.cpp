#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qtorus/reductions.hpp"

using namespace qtorus;

namespace {

DiffPoly w(int k, int order = 0) { return jet(k, order); }
DiffPoly wb(int k, int order = 0) { return jet(k, order, Family::kOmegaBar); }

const KdvContext& kdv() {
  static const KdvContext c = KdvContext::init(3, 8, 2);
  return c;
}

const BkpContext& bkp() {
  static const BkpContext c = BkpContext::init(3, 8, 2);
  return c;
}

bool vanishes_on_window(const PsiDO& a) {
  for (const auto& [j, c] : a.coeffs()) {
    if (!c.is_zero()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("jet substitution") {
  JetSubstitution t;
  CHECK(t.empty());
  CHECK(t.apply(w(2, 3)) == w(2, 3));
  t.add(Generator::jet(Family::kOmega, 2, 1), w(1) * w(1, 1));
  CHECK(t.constrains(Generator::jet(Family::kOmega, 2, 1)));
  CHECK(!t.constrains(Generator::jet(Family::kOmega, 2, 0)));
  CHECK(t.apply(w(2)) == w(2));
  CHECK(t.apply(w(2, 1)) == w(1) * w(1, 1));
  CHECK(t.apply(w(2, 2)) == w(1, 1) * w(1, 1) + w(1) * w(1, 2));
  DiffPoly p = w(2, 2) * w(3) + w(2, 1);
  CHECK(t.apply(t.apply(p)) == t.apply(p));
  CHECK_THROWS_AS(t.add(Generator::jet(Family::kOmega, 2, 0), w(1)), ConfigurationError);
  CHECK_THROWS_AS(t.add(Generator::jet(Family::kOmega, 3, 0), w(2, 1)), ConfigurationError);
  CHECK_THROWS_AS(t.add(Generator::jet(Family::kOmega, 4, 0), w(4, 1)), ConfigurationError);
}

TEST_CASE("linear elimination") {
  PsiDO r(0, -2);
  r.set(-1, DiffPoly(2) * w(2) - w(1) * w(1));
  r.set(-2, w(1) * w(3) + w(4) - w(2, 1));
  JetSubstitution t = solve_linear_constraints(r, {-1, -2}, Family::kOmega, 0);
  REQUIRE(t.rules().size() == 2);
  CHECK(t.apply(w(2)) == EpsScalar(Rational(1, 2)) * w(1) * w(1));
  // w3 appears only in a product, so w4 is eliminated.
  CHECK(t.rules()[1].jet == Generator::jet(Family::kOmega, 4, 0));
  CHECK(t.apply(w(4)) == w(1) * w(1, 1) - w(1) * w(3));

  PsiDO bad(0, -1);
  bad.set(-1, w(1) * w(1));
  CHECK_THROWS_AS(solve_linear_constraints(bad, {-1}, Family::kOmega, 0), ConfigurationError);
}

TEST_CASE("KdV dressing") {
  const KdvContext& c = kdv();
  // (L2)_- = 0 at d^{-1} reads 2 w1 w1' - 2 w2' - w1'' = 0.
  CHECK(c.substitution().apply(w(2, 1)) == w(1) * w(1, 1) - EpsScalar(Rational(1, 2)) * w(1, 2));
  const PsiDO& l2 = c.L2();
  CHECK(l2.coeff(2) == DiffPoly(1));
  CHECK(l2.coeff(1).is_zero());
  CHECK(l2.coeff(0) == DiffPoly(-2) * w(1, 1));
  CHECK(l2.window() <= -5);
  for (int j = -1; j >= l2.window(); --j) CHECK(l2.coeff(j).is_zero());
  // The unreduced square has a negative part.
  CHECK(!KdvContext::init(3, 6, 0, false).L2().coeff(-1).is_zero());

  CHECK(c.Gamma().coeff(-1) == EpsScalar(Rational(1, 2)) * time_var(1));
  CHECK(c.Gamma().coeff(1) == EpsScalar(Rational(3, 2)) * time_var(3));
  CHECK(check_kdv_canonical(c).status == Status::kPass);
  CHECK_THROWS_AS(KdvContext::init(2, 6, 0), ConfigurationError);
}

TEST_CASE("KdV flows") {
  const KdvContext& c = kdv();
  Derivation d1 = kdv_sato_flow(c, 1);
  for (int k = 1; k <= d1.jet_depth(Family::kOmega); ++k) {
    CHECK(d1.jet_action(Family::kOmega, k) == c.substitution().apply(w(k, 1)));
  }
  // u = -2 w1' evolves by u_t = u'''/4 + 3 u u'/2.
  Derivation d3 = kdv_sato_flow(c, 3);
  DiffPoly u = DiffPoly(-2) * w(1, 1);
  DiffPoly ux = total_x_derivative(u), uxxx = total_x_derivative(u, 3);
  DiffPoly expect = EpsScalar(Rational(1, 4)) * uxxx + EpsScalar(Rational(3, 2)) * u * ux;
  CHECK(d3.apply(u) == c.substitution().apply(expect));
  CHECK_THROWS_AS(kdv_sato_flow(c, 2), ConfigurationError);

  Derivation a = kdv_additional_flow(c, 0, 3);
  for (int k = 1; k <= std::min(a.jet_depth(Family::kOmega), d3.jet_depth(Family::kOmega)); ++k) {
    CHECK(a.jet_action(Family::kOmega, k) == d3.jet_action(Family::kOmega, k));
  }
  Derivation z = kdv_quantum_flow(c, 0, 0, 3);
  for (int k = 1; k <= 6; ++k) CHECK(z.apply(w(k)).is_zero());

  CHECK(check_flow_commutation("kdv.odd", d1, d3, c.S()).ok());
  KdvContext c5 = KdvContext::init(5, 10, 0);
  CHECK(check_flow_commutation("kdv.odd", kdv_sato_flow(c5, 3), kdv_sato_flow(c5, 5), c5.S()).ok());
}

TEST_CASE("KdV form preservation probe") {
  const KdvContext& c = kdv();
  Report r1 = check_form_preservation(c, kdv_sato_flow(c, 1));
  CHECK(r1.status == Status::kRecorded);
  CHECK(r1.details.front() == "preserved");
  CHECK(check_form_preservation(c, kdv_sato_flow(c, 3)).details.front() == "preserved");
  // d_{t_{1,0}} is generated by M alone and keeps L2 differential.
  CHECK(check_form_preservation(c, kdv_additional_flow(c, 1, 0)).details.front() == "preserved");
  Report q = check_form_preservation(c, kdv_quantum_flow(c, 1, 1, 2));
  CHECK(q.status == Status::kRecorded);
  CHECK(!q.details.empty());
}

TEST_CASE("KdV quantum flows against the odd flows") {
  // On the bare dressing the quantum flows commute with t_1 and t_3.
  KdvContext bare = KdvContext::init(3, 10, 1, false);
  Derivation q = kdv_quantum_flow(bare, 1, 1, 2);
  CHECK(check_flow_commutation("kdv.thm", q, kdv_sato_flow(bare, 1), bare.S()).ok());
  CHECK(check_flow_commutation("kdv.thm", q, kdv_sato_flow(bare, 3), bare.S()).ok());
  // They leave the reduced ring, where the bracket no longer vanishes.
  KdvContext red = KdvContext::init(3, 10, 1);
  Report r = check_flow_commutation("kdv.thm", kdv_quantum_flow(red, 1, 1, 2), kdv_sato_flow(red, 3), red.S());
  CHECK(r.status == Status::kFail);
}

TEST_CASE("B constraints") {
  CHECK(solve_b_constraints(0, 4).empty());
  JetSubstitution t = solve_b_constraints(1, 4);
  REQUIRE(t.rules().size() == 1);
  // 2 wb2 + 2 wb1' - wb1^2 = 0.
  CHECK(t.rules()[0].jet == Generator::jet(Family::kOmegaBar, 2, 0));
  CHECK(t.apply(wb(2)) == EpsScalar(Rational(1, 2)) * wb(1) * wb(1) - wb(1, 1));
  JetSubstitution full = solve_b_constraints(7, 8);
  for (const auto& rule : full.rules()) CHECK(rule.jet.base() % 2 == 0);
  CHECK(full.rules().size() == 4);
  DiffPoly p = wb(2, 2) * wb(4) + wb(6, 1) * wb(3);
  CHECK(full.apply(full.apply(p)) == full.apply(p));
  CHECK_THROWS_AS(solve_b_constraints(4, 4), ConfigurationError);
}

TEST_CASE("BKP dressing") {
  const BkpContext& c = bkp();
  CHECK(c.L().coeff(1) == DiffPoly(1));
  CHECK(c.L().coeff(0).is_zero());
  CHECK(c.L().coeff(-1) == -wb(1, 1));
  CHECK(check_dressing_condition(c).ok());
  CHECK(check_bkp_canonical(c).status == Status::kPass);
  CHECK(check_btype(c.L(), c.substitution(), "L_B").ok());
  CHECK(check_btype(c.M(), c.substitution(), "M_B").status == Status::kFail);
  CHECK(check_btype(PsiDO::zero(), c.substitution(), "0").status == Status::kPass);
  // Symbol level: L_B Phi = Phi d.
  PsiDO lphi = c.reduce(compose(c.L(), c.Phi()));
  PsiDO phid = c.reduce(compose(c.Phi(), PsiDO::d(1)));
  CHECK(!first_difference(lphi, phid).has_value());
  CHECK(check_dressing_condition(BkpContext::init(3, 6, 0, false)).status == Status::kFail);
  CHECK_THROWS_AS(BkpContext::init(2, 6, 0), ConfigurationError);
}

TEST_CASE("B and D operators") {
  const BkpContext& c = bkp();
  CHECK(vanishes_on_window(build_Bmn(c, 0, 2)));
  CHECK(!first_difference(build_Bmn(c, 0, 1), c.L() * EpsScalar(2L)).has_value());
  CHECK(vanishes_on_window(build_Bmn(c, 0, 0)));
  for (int m = 0; m <= 4; ++m) {
    for (int n = 0; m + n <= 4; ++n) CHECK(check_btype(build_Bmn(c, m, n), c.substitution(), "B").ok());
  }
  CHECK(vanishes_on_window(build_Dmn(c, 0, 0, 3)));
  CHECK(check_btype(build_Dmn(c, 1, 1, 4), c.substitution(), "D11").ok());
  // With eps cap 0 only the s = 0 terms survive.
  BkpContext c0 = BkpContext::init(3, 8, 0);
  PsiDO d0 = build_Dmn(c0, 1, 1, 2);
  PsiDO sum = build_Bmn(c0, 0, 0) + build_Bmn(c0, 1, 0) + build_Bmn(c0, 2, 0) * EpsScalar(Rational(1, 2));
  CHECK(!first_difference(d0, sum).has_value());

  BkpContext bare = BkpContext::init(3, 8, 2, false);
  CHECK(check_btype(build_Bmn(bare, 1, 1), bare.substitution(), "B11").status == Status::kFail);
}

TEST_CASE("Orlov-Shulman lemma") {
  CHECK(check_mb_lemma(bkp()).ok());
  CHECK(check_mb_lemma(BkpContext::init(3, 6, 2)).ok());
  CHECK(check_mb_lemma(BkpContext::init(3, 8, 2, false)).status == Status::kFail);
}

TEST_CASE("BKP flows") {
  const BkpContext& c = bkp();
  Derivation d1 = bkp_sato_flow(c, 1);
  CHECK(d1.apply(wb(1)) == wb(1, 1));
  CHECK(d1.apply(wb(3, 2)) == wb(3, 3));
  CHECK_THROWS_AS(bkp_sato_flow(c, 2), ConfigurationError);
  // B_{0,1} = 2 L_B, so d_{t_{0,1}} is twice the x-flow.
  Derivation a01 = bkp_additional_flow(c, 0, 1);
  CHECK(a01.apply(wb(3)) == DiffPoly(2) * wb(3, 1));

  Derivation d3 = bkp_sato_flow(c, 3);
  CHECK(check_flow_commutation("bkp.prop", bkp_additional_flow(c, 1, 1), d3, c.Phi()).ok());
  CHECK(check_flow_commutation("bkp.prop", bkp_additional_flow(c, 2, 1), d1, c.Phi()).ok());
  CHECK(check_btype_preservation(c, d3).ok());
  CHECK(check_btype_preservation(c, bkp_additional_flow(c, 1, 1)).ok());
}
