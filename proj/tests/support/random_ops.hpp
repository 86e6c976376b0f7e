#ifndef QTORUS_TESTS_RANDOM_OPS_HPP
#define QTORUS_TESTS_RANDOM_OPS_HPP

#include <random>

#include "qtorus/psido.hpp"

namespace qtorus::testing {

// Small random polynomial in omega_1, omega_2 (orders <= 1) and t_1, t_2.
inline DiffPoly random_poly(std::mt19937& rng, int max_terms = 3) {
  std::uniform_int_distribution<int> nterms(0, max_terms);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> pick(0, 6);
  std::uniform_int_distribution<int> nfac(0, 2);
  DiffPoly p;
  int n = nterms(rng);
  for (int i = 0; i < n; ++i) {
    DiffPoly m(coef(rng));
    int f = nfac(rng);
    for (int j = 0; j < f; ++j) {
      switch (pick(rng)) {
        case 0: m = m * jet(1); break;
        case 1: m = m * jet(1, 1); break;
        case 2: m = m * jet(2); break;
        case 3: m = m * jet(2, 1); break;
        case 4: m = m * time_var(1); break;
        case 5: m = m * time_var(2); break;
        default: break;
      }
    }
    p += m;
  }
  return p;
}

// Random operator with top in [0, 2] and window in [-6, -2].
inline PsiDO random_operator(std::mt19937& rng) {
  std::uniform_int_distribution<int> top(0, 2);
  std::uniform_int_distribution<int> win(-6, -2);
  int n = top(rng);
  PsiDO a(n, win(rng));
  for (int j = n; j >= a.window(); --j) a.set(j, random_poly(rng));
  return a;
}

// Extends an operator below its window with fresh random coefficients.
inline PsiDO deepen(const PsiDO& a, int new_window, std::mt19937& rng) {
  PsiDO r(a.top(), new_window);
  for (const auto& [j, c] : a.coeffs()) r.set(j, c);
  for (int j = a.window() - 1; j >= new_window; --j) r.set(j, random_poly(rng));
  return r;
}

}  // namespace qtorus::testing

#endif  // QTORUS_TESTS_RANDOM_OPS_HPP
