#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qtorus/kp.hpp"
#include "qtorus/quantum_torus.hpp"

using namespace qtorus;

namespace {

const KpContext& ctx6() {
  static const KpContext c = KpContext::init(3, 6, 2);
  return c;
}

DiffPoly w(int k, int order = 0) { return jet(k, order); }

}  // namespace

TEST_CASE("dressing data") {
  const KpContext& c = ctx6();
  CHECK(c.L().coeff(1) == DiffPoly(1));
  CHECK(c.L().coeff(0).is_zero());
  CHECK(c.L().coeff(-1) == -w(1, 1));
  CHECK(c.L().coeff(-2) == w(1) * w(1, 1) - w(2, 1));
  // L S = S d on the common window.
  PsiDO ls = compose(c.L(), c.S());
  PsiDO sd = compose(c.S(), PsiDO::d(1));
  CHECK(!first_difference(ls, sd).has_value());
  CHECK(common_range(ls, sd).first <= -4);
  CHECK(!first_difference(compose(c.S(), c.S_inv()), PsiDO::identity()).has_value());
}

TEST_CASE("gamma and the x-translation") {
  const KpContext& c = ctx6();
  PsiDO g = c.Gamma();
  CHECK(g.is_exact());
  CHECK(g.coeff(0) == time_var(1));
  CHECK(g.coeff(2) == DiffPoly(3) * time_var(3));
  PsiDO one = commutator(PsiDO::d(1), g);
  CHECK(one.coeffs().size() == 1);
  CHECK(one.coeff(0) == DiffPoly(1));
}

TEST_CASE("B_n projections") {
  const KpContext& c = ctx6();
  PsiDO b1 = bn(c, 1);
  CHECK(b1.coeffs().size() == 1);
  CHECK(b1.coeff(1) == DiffPoly(1));
  PsiDO b2 = bn(c, 2);
  CHECK(b2.coeff(2) == DiffPoly(1));
  CHECK(b2.coeff(1).is_zero());
  CHECK(b2.coeff(0) == DiffPoly(2) * c.L().coeff(-1));
  auto [p, m] = split(c.L_power(3));
  CHECK(equal_on_window(p + m, c.L_power(3)));
  CHECK(p.coeffs() == bn(c, 3).coeffs());
  CHECK_THROWS_AS(bn(c, 0), ConfigurationError);
}

TEST_CASE("Sato flows") {
  const KpContext& c = ctx6();
  Derivation d1 = sato_flow(c, 1);
  for (int k = 1; k <= d1.jet_depth(Family::kOmega); ++k) CHECK(d1.jet_action(Family::kOmega, k) == w(k, 1));
  CHECK(d1.jet_depth(Family::kOmega) >= 4);
  Derivation d2 = sato_flow(c, 2);
  CHECK(d2.jet_action(Family::kOmega, 1) == w(1, 2) + DiffPoly(2) * w(2, 1) - DiffPoly(2) * w(1) * w(1, 1));
  CHECK(d2.apply(time_var(2)) == DiffPoly(1));
  CHECK_THROWS_AS(sato_flow(c, 4), ConfigurationError);
  for (int n = 1; n <= 3; ++n) CHECK(check_lax_form(c, n).ok());
}

TEST_CASE("additional flows") {
  const KpContext& c = ctx6();
  Derivation z = additional_flow(c, 0, 0);
  for (int k = 1; k <= 6; ++k) CHECK(z.jet_action(Family::kOmega, k).is_zero());
  for (int n = 1; n <= 3; ++n) CHECK(check_sato_equivalence(c, n).ok());
  CHECK(check_additional_lax_form(c, 1, 1).ok());
  CHECK(check_additional_lax_form(c, 2, 0).ok());
  // Additional flows never move explicit times.
  CHECK(additional_flow(c, 1, 1).apply(time_var(1)).is_zero());
}

TEST_CASE("quantum flow weights and truncation") {
  for (int p = 0; p <= 2; ++p) {
    for (int s = 0; s <= 2; ++s) {
      EpsScalar expect = EpsScalar::monomial(Rational(1) / (factorial(p) * factorial(s)), s, 2);
      CHECK(quantum_weight(1, 1, p, s, 2) == expect);
    }
  }
  CHECK(quantum_weight(0, 0, 0, 0, 2) == EpsScalar(1L));
  CHECK(quantum_weight(0, 3, 1, 0, 2).is_zero());

  KpContext c = KpContext::init(1, 6, 2);
  Derivation q00 = quantum_flow(c, 0, 0, 3);
  CHECK(q00.apply(w(1)).is_zero());
  // Restricting the p-sum reproduces the shorter truncation.
  Derivation q2 = quantum_flow(c, 1, 1, 2), q1 = quantum_flow(c, 1, 1, 1);
  Derivation diff = q2 + EpsScalar(-1L) * q1;
  Derivation tail = EpsScalar(Rational(1, 2)) * additional_flow(c, 2, 0) +
                    EpsScalar::monomial(Rational(1, 2), 1, 2) * additional_flow(c, 2, 1) +
                    EpsScalar::monomial(Rational(1, 4), 2, 2) * additional_flow(c, 2, 2);
  int depth = std::min(diff.jet_depth(Family::kOmega), tail.jet_depth(Family::kOmega));
  CHECK(depth >= 1);
  for (int k = 1; k <= depth; ++k) CHECK(diff.jet_action(Family::kOmega, k) == tail.jet_action(Family::kOmega, k));
}

TEST_CASE("canonical relation") {
  Report r = check_canonical(ctx6());
  CHECK(r.status == Status::kPass);
  PsiDO g = gamma_operator(3, 0, 1, false);
  g.set(0, DiffPoly(0));
  Report bad = check_canonical(KpContext::with_gamma(3, 6, 2, g));
  CHECK(bad.status == Status::kFail);
  REQUIRE(!bad.details.empty());
  CHECK(bad.details.front().rfind("degree 0:", 0) == 0);
}

TEST_CASE("flow commutation") {
  const KpContext& c = ctx6();
  Derivation s3 = sato_flow(c, 3);
  CHECK(check_flow_commutation("self", s3, s3, c.S()).ok());
  CHECK(check_flow_commutation("prop", additional_flow(c, 1, 1), sato_flow(c, 2), c.S()).ok());
  // Two additional flows do not commute: [d_{t_{1,0}}, d_{t_{0,2}}] = 2 d_{t_{0,1}}.
  Report r = check_flow_commutation("noncommuting", additional_flow(c, 1, 0), additional_flow(c, 0, 2), c.L());
  CHECK(r.status == Status::kFail);
  PsiDO lhs = flow_commutator(additional_flow(c, 1, 0), additional_flow(c, 0, 2), c.L());
  PsiDO rhs = c.additional_on_L(0, 1) * EpsScalar(2L);
  CHECK(!first_difference(lhs, rhs).has_value());
}

TEST_CASE("W structure on small indices") {
  const KpContext& c = ctx6();
  CHECK(check_w_structure(c, 0, 1, 0, 2).ok());
  CHECK(check_w_structure(c, 1, 0, 0, 1).ok());
  CHECK(check_w_structure(c, 1, 1, 1, 1).ok());
  CHECK(check_w_structure(c, 2, 0, 0, 2).ok());
}

TEST_CASE("quantum torus relation bookkeeping") {
  KpContext c = KpContext::init(1, 6, 1);
  Report sym = check_qt_relation(c, 1, 1, 1, 1, 2);
  CHECK(sym.ok());
  Report r = check_qt_relation(c, 1, 0, 0, 1, 2);
  CHECK(r.details.front() == "prefactor q^{ml} - q^{nk} = -eps");
  Report err = check_qt_relation(c, 1, 0, 0, 1, 0);
  CHECK(err.status == Status::kError);
}
