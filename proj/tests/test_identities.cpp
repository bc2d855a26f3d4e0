#include "doctest.h"
#include "zmw/identities.hpp"
#include "zmw/version.hpp"

using namespace zmw;

namespace {

ShiftSet loose(std::vector<Complex> v) { return ShiftSet::multiset(std::move(v)); }

}  // namespace

TEST_CASE("tau recursion") {
  CHECK(check_tauid(loose({0.0, 0.0}), 3, 12).max_residual < 1e-15);
  // singleton: p^{-ar} = 0 + p^{-a} p^{-a(r-1)}
  CHECK(check_tauid(ShiftSet({Complex{0.05, -0.07}}), 5, 20).max_residual < 1e-14);
  const ShiftSet A({Complex{0.03, 0.08}, Complex{-0.06, 0.02}, Complex{0.01, -0.09}, Complex{0.07, 0.0}});
  const auto r = check_tauid(A, 2, 10);
  CHECK(r.max_residual < 1e-12);
  CHECK(r.count == 40);
  CHECK_THROWS_AS(check_tauid(ShiftSet(), 2, 3), DomainError);
}

TEST_CASE("convolution identity") {
  const Complex b{0.04, -0.03};
  CHECK(check_convolution_id(ShiftSet(), b, 3, 10).max_residual < 1e-14);
  // A' = {0}, b = 0: r + 1 = d(p^r)
  CHECK(check_convolution_id(ShiftSet({0.0}), 0.0, 2, 30).max_residual < 1e-15);
  const ShiftSet Ap({Complex{0.02, 0.05}, Complex{-0.08, 0.01}, Complex{0.0, -0.06}});
  CHECK(check_convolution_id(Ap, Complex{-0.05, 0.07}, 5, 8).max_residual < 1e-12);
}

TEST_CASE("G closed form") {
  const ArithmeticSieve sieve(1000);
  // k = 1: A' is empty and G_A(1 - a, p^r) vanishes for r >= 1
  const ShiftSet one({Complex{0.03, 0.02}});
  for (const std::uint64_t q : {2u, 4u, 9u, 125u}) CHECK(std::abs(G_of(one, 1.0 - one[0], q, sieve)) < 1e-14);
  CHECK(check_G_closed_form(one, 0, 3, 5).max_residual < 1e-14);
  // A = {0,0}: (1/2) sum_j (j+2) 2^{-j} - ... evaluates to 1 at p = 2, r = 1
  CHECK(std::abs(G_of(loose({0.0, 0.0}), 1.0, 2, sieve) - 1.0) < 1e-14);
  CHECK(check_G_closed_form(loose({0.0, 0.0}), 0, 2, 6).max_residual < 1e-12);
  const ShiftSet A({Complex{0.05, 0.03}, Complex{-0.04, 0.06}, Complex{0.02, -0.08}});
  for (std::size_t i = 0; i < 3; ++i) CHECK(check_G_closed_form(A, i, 7, 4).max_residual < 1e-10);
  CHECK_THROWS_AS(check_G_closed_form(A, 0, 7, 9), BoundsError);
  CHECK_THROWS_AS(check_G_closed_form(A, 3, 7, 2), DomainError);
}

TEST_CASE("local identity") {
  // k = l = 1: both sides are 1
  const ShiftSet a({Complex{0.04, 0.01}}), b({Complex{-0.02, 0.05}});
  const auto single = check_local_identity(a, b, 0, 0, 3, {0.0, Complex{0.1, 0.05}});
  CHECK(single.at_zero.max_residual < 1e-14);
  CHECK(std::abs(single.at_zero.worst_lhs - 1.0) < 1e-14);
  CHECK(single.shifted.max_residual < 1e-14);
  CHECK(single.shifted.count == 2);

  const ShiftSet A({Complex{0.05, 0.03}, Complex{-0.04, 0.06}, Complex{0.02, -0.08}});
  const ShiftSet B({Complex{-0.03, -0.02}, Complex{0.07, 0.01}});
  std::vector<Complex> grid;
  for (const double x : {-0.1, 0.05, 0.2}) {
    for (const double y : {-0.1, 0.0, 0.1}) grid.emplace_back(x, y);
  }
  for (const std::uint64_t p : {2u, 3u, 5u, 7u, 101u}) {
    for (std::size_t ia = 0; ia < 3; ++ia) {
      for (std::size_t ib = 0; ib < 2; ++ib) {
        const auto r = check_local_identity(A, B, ia, ib, p, grid);
        CHECK(r.at_zero.max_residual < 1e-12);
        CHECK(r.shifted.max_residual < 1e-12);
      }
    }
  }
}

TEST_CASE("telescoping steps") {
  const ShiftSet A({Complex{0.05, 0.03}, Complex{-0.04, 0.06}, Complex{0.02, -0.08}});
  const ShiftSet B({Complex{-0.03, -0.02}, Complex{0.07, 0.01}});
  for (const std::uint64_t p : {2u, 7u}) {
    const auto t = check_intermediate_telescoping(A, B, 1, 0, p, 12);
    CHECK(t.splitting.max_residual < 1e-13);
    CHECK(t.g_difference.max_residual < 1e-12);
    CHECK(t.rearrangement.max_residual < 1e-12);
    CHECK(t.product.max_residual < 1e-12);
    CHECK(t.product.count == 12);
    CHECK(t.g_difference.count == 26);
  }
  // d = 0 of (ii): G(1) - p^{-1+a} G(p) is the bare prefactor
  const Complex ah = A[1];
  const auto G = G_prime_powers(A, 1.0 - ah, 3, 1);
  Complex pre = 1.0;
  for (const std::size_t i : {0u, 2u}) pre *= 1.0 - std::pow(3.0, -1.0 + ah - A[i]);
  CHECK(std::abs(G[0] - std::pow(3.0, -1.0 + ah) * G[1] - pre) < 1e-13);
  // B' empty: every B-side product is 1
  const auto d = check_intermediate_telescoping(A, ShiftSet({Complex{0.01, 0.02}}), 0, 0, 5, 10);
  CHECK(d.splitting.max_residual < 1e-13);
  CHECK(d.g_difference.max_residual < 1e-12);
  CHECK(d.rearrangement.max_residual < 1e-12);
  CHECK(d.product.max_residual < 1e-12);
}

TEST_CASE("translation identity") {
  const ShiftSet A({Complex{0.03, 0.02}, -0.05}), B({Complex{0.01, -0.04}, 0.06});
  CHECK(check_translation_identity(A, B, 0.07, 0.0, 5).max_residual == 0.0);
  CHECK(check_translation_identity(A, B, 0.05, 0.05, 3).max_residual < 1e-12);
  CHECK(check_translation_identity(A, B, Complex{0.0, 0.08}, Complex{0.0, -0.03}, 2).max_residual < 1e-12);
  CHECK(check_translation_identity_global(A, B, 0.05, Complex{0.0, 0.04}, 10000).max_residual < 1e-9);
}

TEST_CASE("Dirichlet series against the Euler product") {
  const auto z = check_dirichlet_series(ShiftSet({0.0}), ShiftSet({0.0}), 1.0, 1000000, 1000);
  CHECK(std::abs(z.partial_sum + z.sum_tail - kPi * kPi / 6.0) < 1e-10);
  CHECK(std::abs(z.partial_sum - kPi * kPi / 6.0) < 1.01e-6);
  CHECK(std::abs(z.product - kPi * kPi / 6.0) < 1e-12);
  CHECK(z.within_estimates());

  // sum d(n)^2 n^{-2} = zeta(2)^4 / zeta(4)
  const double z2 = kPi * kPi / 6.0, z4 = std::pow(kPi, 4) / 90.0;
  const auto d = check_dirichlet_series(loose({0.0, 0.0}), loose({0.0, 0.0}), 1.0, 200000, 10000);
  CHECK(d.within_estimates());
  CHECK(std::abs(d.product - z2 * z2 * z2 * z2 / z4) < 1e-9);
  CHECK(std::abs(d.partial_sum + d.sum_tail - z2 * z2 * z2 * z2 / z4) < 1e-4);

  const ShiftSet A({Complex{0.06, 0.02}, Complex{-0.03, 0.05}}), B({Complex{0.02, -0.07}, 0.04});
  for (const Complex s : {Complex{1.0, 0.0}, Complex{1.2, 3.0}}) {
    const auto r = check_dirichlet_series(A, B, s, 200000, 10000, 2);
    CHECK(r.within_estimates());
    CHECK(r.gap < 1e-3);
  }
  CHECK_THROWS_AS(check_dirichlet_series(A, B, 0.9, 1000, 100), DomainError);
}

TEST_CASE("suite: draws, determinism, reproducers") {
  IdentitySuiteConfig cfg;
  cfg.draws = 24;
  const auto a = run_identity_suite(cfg, 1);
  const auto b = run_identity_suite(cfg, 3);
  CHECK(a.passed());
  REQUIRE(a.checks.size() == 11);
  for (const auto& c : a.checks) {
    CHECK(c.count > 0);
    CHECK(c.max_residual < 1e-9);
  }
  auto ja = suite_json(a), jb = suite_json(b);
  ja.erase("timing");
  jb.erase("timing");
  CHECK(ja.dump() == jb.dump());
  CHECK(ja["version"] == kVersion);

  const auto d = make_draw(cfg, 5);
  const auto again = make_draw(cfg, 5);
  CHECK(d.A == again.A);
  CHECK(d.p == again.p);
  CHECK(d.A.size() <= 3);
  for (const Complex x : d.A) CHECK(std::abs(x) <= 0.1);

  // impossible tolerance: every draw fails and replays alone
  cfg.tolerance = 0.0;
  cfg.translation_tolerance = -1.0;
  cfg.draws = 4;
  const auto failing = run_identity_suite(cfg, 2);
  CHECK_FALSE(failing.passed());
  const auto& f = failing.failures.back();
  const auto repro = reproducer_json(cfg, f.draw);
  IdentitySuiteConfig replay = cfg;
  replay.first_draw = repro["first_draw"];
  replay.draws = repro["draws"];
  const auto again_run = run_identity_suite(replay, 1);
  bool found = false;
  for (const auto& g : again_run.failures) {
    if (g.identity == f.identity) found = g.residual == f.residual;
  }
  CHECK(found);

  cfg.primes = {2, 4};
  CHECK_THROWS_AS(run_identity_suite(cfg, 1), ValidationError);
}
