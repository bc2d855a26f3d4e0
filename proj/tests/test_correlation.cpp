#include <algorithm>

#include "doctest.h"
#include "zmw/correlation.hpp"
#include "zmw/euler.hpp"

using namespace zmw;

namespace {

// (1/2 pi i) on |s| = 1/8 of G_A(1+s, q) (u/q)^s prod_a zeta(1 + s + a).
Complex density_contour(const ShiftSet& A, double u, std::uint64_t q, const ArithmeticSieve& sieve) {
  const double uq = u / static_cast<double>(q);
  return residue_at(
      [&](Complex s) {
        Complex z = G_of(A, 1.0 + s, q, sieve) * std::pow(uq, s);
        for (const Complex a : A) z *= zeta(1.0 + s + a);
        return z;
      },
      {0.0, 0.125, 128});
}

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("P_density single shift and contour oracle") {
  const ArithmeticSieve sieve(1000);
  const Complex a{0.03, -0.02};
  CHECK(rel(P_density(ShiftSet({a}), 1e5, 1, sieve), std::pow(1e5, -a)) < 1e-14);

  const ShiftSet D = ShiftSet::real({0.05, -0.05});
  CHECK(rel(P_density(D, 1e6, 1, sieve), density_contour(D, 1e6, 1, sieve)) < 1e-10);
  const ShiftSet A = ShiftSet::real({0.03, -0.01});
  for (const std::uint64_t q : {2u, 6u, 30u}) {
    CHECK(rel(P_density(A, 1e6, q, sieve), density_contour(A, 1e6, q, sieve)) < 1e-8);
  }
  const ShiftSet C({Complex{0.02, 0.04}, Complex{-0.03, 0.01}, 0.05});
  CHECK(rel(P_density(C, 5e4, 12, sieve), density_contour(C, 5e4, 12, sieve)) < 1e-8);

  CHECK_THROWS_AS(P_density(ShiftSet::multiset({0.01, 0.01}), 10.0, 1, sieve), DomainError);
}

TEST_CASE("P_density confluent limit is the classical twisted divisor density") {
  // tau_{d,-d} -> d(n), whose density twisted by e(n/q) is log(u/q^2) + 2 gamma.
  const ArithmeticSieve sieve(100);
  const ShiftSet A = ShiftSet::real({1e-4, -1e-4});
  for (const std::uint64_t q : {1u, 2u, 6u, 12u, 30u}) {
    const double qd = static_cast<double>(q);
    const double want = std::log(1e6 / (qd * qd)) + 2.0 * kEulerGamma;
    CHECK(std::abs(P_density(A, 1e6, q, sieve) - want) < 1e-5);
  }
}

TEST_CASE("f_density structure") {
  const ArithmeticSieve sieve(8000);
  const ShiftSet A = ShiftSet::real({0.02, -0.02});
  const auto f = f_density(A, A, 1e6, 1, 400, sieve);
  CHECK(f.value.real() > 0.0);
  CHECK(std::abs(f.value.imag()) < 1e-12 * f.value.real());
  CHECK_FALSE(f.outside_range);
  CHECK(f_density(A, A, 5.0, 7, 100, sieve).outside_range);

  // literal mu-weighted sum of squared densities
  CompensatedSum s;
  for (std::uint64_t q = 1; q <= 400; ++q) {
    const int mu = sieve.mobius(q);
    if (mu == 0) continue;
    const Complex P = P_density(A, 1e6, q, sieve);
    s += static_cast<double>(mu) / static_cast<double>(q * q) * P * P;
  }
  CHECK(rel(f.value, s.value()) < 1e-13);
  const auto f100 = f_density(A, A, 1e6, 1, 100, sieve);
  CHECK(rel(f100.value, f.value) < 5e-4);
  CHECK(std::abs(f100.value - f.value) < f100.truncation_estimate);
  CHECK_THROWS_AS(f_density(A, A, 1e6, 0, 100, sieve), DomainError);
  CHECK_THROWS_AS(f_density(A, A, 1e6, 100, 100, sieve), BoundsError);
}

TEST_CASE("m_prime divisor structure") {
  const ArithmeticSieve sieve(6 * 200);
  const ShiftSet A = ShiftSet::real({0.02, -0.02});
  const ShiftSet B({Complex{0.01, 0.01}, Complex{-0.02, 0.0}});
  const double u = 1e5;
  auto f = [&](std::uint64_t d) { return f_density(A, B, u, d, 200, sieve).value; };
  CHECK(rel(m_prime(A, B, u, 1, 200, sieve), f(1)) < 1e-15);
  CHECK(rel(m_prime(A, B, u, 6, 200, sieve), f(1) + f(2) / 2.0 + f(3) / 3.0 + f(6) / 6.0) < 1e-13);
  CHECK(rel(m_prime(A, B, u, 4, 200, sieve) - m_prime(A, B, u, 2, 200, sieve), f(4) / 4.0) < 1e-10);
  CHECK_THROWS_AS(m_prime(A, B, u, 0, 200, sieve), DomainError);

  const CorrelationModel model(A, B, 6, 200, sieve);
  for (const double t : {2.0, 1e3, 1e5}) {
    CHECK(rel(model.derivative(t), m_prime(A, B, t, 6, 200, sieve)) < 1e-12);
  }
}

TEST_CASE("m_main quadrature") {
  const ArithmeticSieve sieve(3 * 400);
  const ShiftSet A = ShiftSet::real({0.02, -0.02});
  const ShiftSet B({Complex{0.03, 0.02}, Complex{-0.01, -0.04}});
  const CorrelationModel model(A, B, 3, 400, sieve);
  CHECK(std::abs(model.main_term(1.0)) == 0.0);
  for (const double u : {10.0, 12345.6, 1e6}) {
    const Complex q16 = model.main_term(u, 16);
    CHECK(rel(q16, model.main_term_exact(u)) < 1e-12);
    CHECK(rel(model.main_term(u, 32), q16) < 1e-6);
  }
  CHECK(rel(m_main(A, B, 1e6, 3, 400, sieve), model.main_term_exact(1e6)) < 1e-12);
}

TEST_CASE("D_empirical") {
  const auto one = tau_table(ShiftSet::real({0.0}), 200);
  CHECK(D_empirical(one, one, 100, 5) == Complex{100.0, 0.0});
  const auto d = tau_table(ShiftSet::real({0.0, 0.0}), 2000);
  CHECK(D_empirical(d, one, 10, 1).real() == doctest::Approx(27.0).epsilon(1e-15));

  double brute = 0.0;
  for (int n = 1; n <= 1000; ++n) {
    int a = 0, b = 0;
    for (int k = 1; k <= n; ++k) a += n % k == 0;
    for (int k = 1; k <= n + 2; ++k) b += (n + 2) % k == 0;
    brute += a * b;
  }
  CHECK(std::abs(D_empirical(d, d, 1000, 2).real() - brute) < 1e-9 * brute);
  CHECK_THROWS_AS(D_empirical(d, d, 1999, 2), BoundsError);
}

TEST_CASE("D_empirical swapped-orientation symmetry") {
  const ShiftSet A({Complex{0.01, 0.03}, -0.02}), B({0.04, Complex{0.0, -0.05}});
  const auto ta = tau_table(A, 3000), tb = tau_table(B, 3000);
  // sum_{n <= u} tau_A(n) tau_B(n+h) = sum_{h < m <= u+h} tau_B(m) tau_A(m-h)
  const std::uint64_t u = 2500, h = 7;
  CompensatedSum s;
  for (std::uint64_t m = h + 1; m <= u + h; ++m) s += tb[m] * ta[m - h];
  CHECK(rel(D_empirical(ta, tb, u, h), s.value()) < 1e-13);
}

TEST_CASE("correlation job validation") {
  CorrelationJob job{ShiftSet::real({0.02, -0.02}), ShiftSet::real({0.02, -0.02})};
  job.u_max = 1000;
  job.h_list = {1, 2};
  CHECK_NOTHROW(job.validate());
  job.h_list = {0};
  CHECK_THROWS_AS(job.validate(), ValidationError);
  job.h_list = {600};  // 1000^0.9 ~ 501
  CHECK_THROWS_AS(job.validate(), ValidationError);
  job.h_list = {1};
  job.q_cutoff = 49;
  CHECK_THROWS_AS(job.validate(), ValidationError);
  job.q_cutoff = 100;
  job.A = ShiftSet::multiset({0.01, 0.01});
  CHECK_THROWS_AS(job.validate(), ValidationError);
}

TEST_CASE("run_correlation: real shifts give real output, CSV shape, thread independence") {
  CorrelationJob job{ShiftSet::real({0.02, -0.02}), ShiftSet::real({0.02, -0.02})};
  job.u_max = 20000;
  job.u_points = {5000, 20000};
  job.h_list = {1, 2, 3};
  job.q_cutoff = 100;
  const auto rows = run_correlation(job, 1);
  REQUIRE(rows.size() == 6);
  for (const auto& r : rows) {
    CHECK(std::abs(r.D.imag()) <= 1e-10 * std::abs(r.D));
    CHECK(std::abs(r.m.imag()) <= 1e-10 * std::abs(r.m));
    CHECK(r.rel_dev < 0.02);
  }
  CHECK(rows[1].u == 20000);
  CHECK(rows[1].h == 1);
  CHECK(rows[1].D == D_empirical(tau_table(job.A, 20003), tau_table(job.A, 20003), 20000, 1));
  const auto csv = correlation_csv(rows);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
  CHECK(csv.rfind("u,h,D_real,D_imag,m_real,m_imag,rel_dev\n", 0) == 0);
  const auto threaded = run_correlation(job, 3);
  CHECK(correlation_csv(threaded) == csv);
}
