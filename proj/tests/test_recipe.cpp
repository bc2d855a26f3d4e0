#include <boost/math/quadrature/gauss.hpp>

#include "doctest.h"
#include "zmw/euler.hpp"
#include "zmw/recipe.hpp"

using namespace zmw;

namespace {

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

const SmoothWeight& weight() {
  static const SmoothWeight w = build_weight();
  return w;
}

// For k = l = 1 the one-swap term in closed form:
//   T int psi(t) [(tT/2pi)^{-c} zeta(1 - c) + X^{-c}/c] dt,  c = a + b.
Complex one_swap_closed(Complex c, double T, double X) {
  return T * integrate_psi_complex([&](double t) {
    return std::pow(t * T / (2.0 * kPi), -c) * zeta(1.0 - c) + std::pow(X, -c) / c;
  });
}

}  // namespace

TEST_CASE("recipe_R for single shifts") {
  const Complex a{0.02, 0.01}, b{0.015, -0.03};
  const ShiftSet A({a}), B({b});
  const double T = 3000.0;
  const Complex want = T * integrate_psi_complex([&](double t) {
    return zeta(1.0 + a + b) + std::pow(t * T / (2.0 * kPi), -a - b) * zeta(1.0 - a - b);
  });
  const auto r = recipe_R(A, B, T, 1000, 1);
  CHECK(rel(r.value, want) < 1e-12);
  REQUIRE(r.terms.size() == 2);
  CHECK(r.terms[0].U.empty());
  CHECK(r.terms[1].U == std::vector<std::size_t>{0});

  const auto r0 = recipe_R(A, B, T, 1000, 0);
  CHECK(rel(r0.value, T * weight().hat_at_zero() * zeta(1.0 + a + b)) < 1e-12);
}

TEST_CASE("recipe_R zero swaps is T psi_hat(0) A Z") {
  const ShiftSet A({0.02, -0.01}), B({0.015, -0.025});
  const auto r = recipe_R(A, B, 1000.0, 5000, 0);
  const Complex want = 1000.0 * weight().hat_at_zero() * global_A(A, B, 5000).value * Z_product(A, B);
  CHECK(rel(r.value, want) < 1e-12);
  CHECK(r.error_estimate > 0.0);
}

TEST_CASE("recipe swap census") {
  const ShiftSet A({0.02, -0.01, Complex{0.0, 0.03}}), B({0.015, -0.025, Complex{0.01, -0.02}});
  const auto r = recipe_R(A, B, 1000.0, 500, 3);
  REQUIRE(r.terms.size() == 20);
  int counts[4] = {0, 0, 0, 0};
  for (const auto& t : r.terms) {
    CHECK(t.U.size() == t.V.size());
    ++counts[t.U.size()];
  }
  CHECK(counts[0] == 1);
  CHECK(counts[1] == 9);
  CHECK(counts[2] == 9);
  CHECK(counts[3] == 1);
  CHECK(recipe_R(A, B, 1000.0, 500, 1).terms.size() == 10);
  CHECK_THROWS_AS(recipe_R(ShiftSet({0.05}), ShiftSet({-0.05}), 1000.0, 500, 0), DomainError);
}

TEST_CASE("diagonal_term") {
  const auto one = tau_table(ShiftSet::real({0.0}), 100);
  double h10 = 0.0;
  for (int n = 1; n <= 10; ++n) h10 += 1.0 / n;
  CHECK(std::abs(diagonal_term(one, one, 1.0, 10.0, weight()) - weight().hat_at_zero() * h10) < 1e-16);
  CHECK(std::abs(diagonal_term(one, one, 1.0, 10.9, weight()) - weight().hat_at_zero() * h10) < 1e-16);
  CHECK(rel(diagonal_term(one, one, 7.0, 10.0, weight()), 7.0 * weight().hat_at_zero() * h10) < 1e-15);
  CHECK_THROWS_AS(diagonal_term(one, one, 1.0, 101.0, weight()), BoundsError);

  const ShiftSet A({Complex{0.01, 0.02}, -0.02}), B({0.015, Complex{-0.01, 0.01}});
  const auto ta = tau_table(A, 500), tb = tau_table(B, 500);
  CompensatedSum s;
  for (std::uint64_t n = 1; n <= 500; ++n) s += tau_at(A, n) * tau_at(B, n) / static_cast<double>(n);
  CHECK(rel(diagonal_term(ta, tb, 100.0, 500.0, weight()), 100.0 * weight().hat_at_zero() * s.value()) < 1e-13);
}

TEST_CASE("one-swap term for single shifts") {
  const double T = 2000.0;
  for (const Complex c : {Complex{0.02, 0.0}, Complex{-0.03, 0.01}}) {
    const ShiftSet A({0.5 * c}), B({0.5 * c});
    for (const double X : {1.5 * T, 30.0 * T, 0.5 * T * T}) {
      const auto r = one_swap_term(A, B, 0, 0, T, X);
      CHECK(r.poles == 2);
      CHECK(rel(r.value, one_swap_closed(c, T, X)) < 1e-10);
    }
  }
}

TEST_CASE("one-swap residues reproduce the vertical line integral") {
  // (1/2 pi i) int_{(1/8)} x^s zeta(1 - c - s) / s ds at fixed x, k = l = 1.
  // Real c and x make the integrand conjugate-symmetric, so integrate y >= 0.
  const double c = 0.02, x = 40.0;
  using GL = boost::math::quadrature::gauss<double, 20>;
  double integral = 0.0;
  const double Y = 2000.0, panel = 1.0;
  for (double y0 = 0.0; y0 < Y; y0 += panel) {
    integral += GL::integrate(
        [&](double y) {
          const Complex s{0.125, y};
          return (std::pow(x, s) * zeta(1.0 - c - s) / s).real();
        },
        y0, y0 + panel);
  }
  integral /= kPi;
  // residues at 0 and -c
  const double want = zeta(1.0 - c).real() + std::pow(x, -c) / c;
  CHECK(std::abs(integral - want) < 1e-3 * std::abs(want));
}

TEST_CASE("one-swap pole bookkeeping and guards") {
  const ShiftSet A({0.02, -0.01}), B({0.015, -0.025, Complex{0.0, 0.03}});
  const auto r = one_swap_term(A, B, 1, 2, 1000.0, 5000.0);
  CHECK(r.poles == (2 - 1) * (3 - 1) + 2);
  CHECK(one_swap_poles(A, B, 1, 2).size() == 4);
  CHECK(r.contour_radius == doctest::Approx(1e-3));
  CHECK_THROWS_AS(one_swap_term(A, B, 0, 0, 1000.0, 999.0), DomainError);
  CHECK_THROWS_AS(one_swap_term(A, B, 0, 0, 1000.0, 0.995e6), DomainError);
  CHECK_THROWS_AS(one_swap_term(A, B, 2, 0, 1000.0, 5000.0), DomainError);
  // A' = {0.01}, B' = {-0.00995}: pole at -5e-5 collides with s = 0
  const ShiftSet C({0.05, 0.01}), D({0.03, -0.00995});
  CHECK_THROWS_AS(one_swap_term(C, D, 0, 0, 1000.0, 5000.0), DomainError);
}

TEST_CASE("one-swap: A_hat route agrees with the swapped-set recipe route") {
  const ShiftSet A({0.02, -0.01}), B({0.015, -0.025});
  OneSwapOptions hat, recipe;
  hat.P = recipe.P = 5000;
  recipe.recipe_route = true;
  for (std::size_t ia = 0; ia < 2; ++ia) {
    const auto a = one_swap_term(A, B, ia, 1 - ia, 2000.0, 40000.0, hat);
    const auto b = one_swap_term(A, B, ia, 1 - ia, 2000.0, 40000.0, recipe);
    CHECK(rel(a.value, b.value) < 1e-6);
  }
}

TEST_CASE("one-swap magnitude shrinks as X falls toward T") {
  const ShiftSet A({0.01}), B({0.01});
  const double T = 5000.0;
  const double m12 = std::abs(one_swap_term(A, B, 0, 0, T, 1.2 * T).value);
  const double m2 = std::abs(one_swap_term(A, B, 0, 0, T, 2.0 * T).value);
  const double m4 = std::abs(one_swap_term(A, B, 0, 0, T, 4.0 * T).value);
  CHECK(m12 < m2);
  CHECK(m2 < m4);
}

TEST_CASE("conjugation symmetry") {
  const ShiftSet A({Complex{0.02, 0.01}, -0.01}), B({0.015, Complex{-0.025, -0.02}});
  const double T = 1500.0;
  CHECK(rel(std::conj(recipe_R(A, B, T, 2000, 1).value), recipe_R(A.conjugated(), B.conjugated(), T, 2000, 1).value) < 1e-10);
  for (std::size_t ia = 0; ia < 2; ++ia) {
    for (std::size_t ib = 0; ib < 2; ++ib) {
      const Complex a = one_swap_term(A, B, ia, ib, T, 20000.0).value;
      const Complex b = one_swap_term(A.conjugated(), B.conjugated(), ia, ib, T, 20000.0).value;
      CHECK(rel(std::conj(a), b) < 1e-10);
    }
  }
  const auto ta = tau_table(A, 20000), tb = tau_table(B, 20000);
  const auto ca = tau_table(A.conjugated(), 20000), cb = tau_table(B.conjugated(), 20000);
  const auto x = conjectured_I(ta, tb, T, 20000.0, weight());
  const auto y = conjectured_I(ca, cb, T, 20000.0, weight());
  CHECK(rel(std::conj(x.value), y.value) < 1e-10);
  CHECK(rel(std::conj(x.diagonal), y.diagonal) < 1e-10);
}

TEST_CASE("conjectured_I bookkeeping") {
  const ShiftSet A({0.02, -0.01}), B({0.015, -0.025});
  const auto ta = tau_table(A, 50000), tb = tau_table(B, 50000);
  const double T = 2000.0;
  const auto below = conjectured_I(ta, tb, T, 0.5 * T, weight());
  CHECK(below.one_swap.empty());
  CHECK(below.value == below.diagonal);
  CHECK(below.diagonal == diagonal_term(ta, tb, T, 0.5 * T, weight()));

  const auto above = conjectured_I(ta, tb, T, 40000.0, weight(), {}, 2);
  REQUIRE(above.one_swap.size() == 4);
  Complex sum = above.diagonal;
  for (const auto& t : above.one_swap) sum += t.value;
  CHECK(rel(above.value, sum) < 1e-14);
  CHECK(above.one_swap[1].ia == 0);
  CHECK(above.one_swap[1].ib == 1);
  const auto serial = conjectured_I(ta, tb, T, 40000.0, weight(), {}, 1);
  CHECK(serial.value == above.value);
  CHECK_THROWS_AS(conjectured_I(ta, tb, 100.0, 9950.0, weight()), DomainError);
}
