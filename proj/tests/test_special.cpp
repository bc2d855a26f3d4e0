#include <boost/math/quadrature/tanh_sinh.hpp>
#include <numeric>
#include <random>

#include "doctest.h"
#include "zmw/special.hpp"

using namespace zmw;

TEST_CASE("zeta classical values") {
  CHECK(std::abs(zeta(2.0) - kPi * kPi / 6.0) < 1e-14);
  CHECK(std::abs(zeta(0.0) + 0.5) < 1e-14);
  CHECK(std::abs(zeta(-1.0) + 1.0 / 12.0) < 1e-14);
  CHECK(std::abs(zeta(-3.0) - 1.0 / 120.0) < 1e-14);
  CHECK(std::abs(zeta(0.5) + 1.4603545088095868) < 1e-13);
  CHECK(std::abs(zeta(4.0) - std::pow(kPi, 4) / 90.0) < 1e-14);
  // first nontrivial zero
  CHECK(std::abs(zeta(Complex{0.5, 14.134725141734693})) < 1e-11);
  CHECK_THROWS_AS(zeta(1.0), DomainError);
}

TEST_CASE("zeta(3) against direct summation") {
  const int N = 100000;
  double s = 0.0;
  for (int n = N; n >= 1; --n) s += 1.0 / (static_cast<double>(n) * n * n);
  const double nn = N;
  s += 1.0 / (2.0 * nn * nn) - 1.0 / (2.0 * nn * nn * nn);  // sum_{n > N} n^{-3}
  CHECK(std::abs(zeta(3.0) - s) < 1e-12 * s);
}

TEST_CASE("zeta near s = 1 has residue one") {
  for (const double step : {1e-3, -1e-3, 1e-5}) {
    // zeta(1 + e) = 1/e + gamma - gamma_1 e + gamma_2 e^2 / 2 + ...
    const double s = 1.0 + step;
    const double e = s - 1.0;  // exact offset of the representable argument
    const Complex z = zeta(s);
    const double want = 1.0 / e + kEulerGamma + 0.0728158454836767 * e - 0.0048451815964361 * e * e;
    CHECK(std::abs(z - want) < 1e-9 * std::abs(e) + 1e-15 * std::abs(want));
  }
}

TEST_CASE("functional equation consistency") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> re(-3.0, 4.0), im(-60.0, 60.0);
  for (int i = 0; i < 20; ++i) {
    const Complex s{re(rng), im(rng)};
    const double lhs = std::abs(zeta_euler_maclaurin(s));
    const double rhs = std::abs(chi(s)) * std::abs(zeta_euler_maclaurin(1.0 - s));
    CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(lhs, 1e-3));
  }
}

TEST_CASE("log_gamma against known values") {
  CHECK(std::abs(gamma_complex(5.0) - 24.0) < 1e-12);
  CHECK(std::abs(gamma_complex(0.5) - std::sqrt(kPi)) < 1e-14);
  // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t)
  for (const double t : {1.0, 10.0, 50.0}) {
    const double want = 0.5 * std::log(kPi / std::cosh(kPi * t));
    CHECK(std::abs(log_gamma(Complex{0.5, t}).real() - want) < 1e-12 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("smooth weight basics") {
  CHECK(SmoothWeight::psi(1.5) == doctest::Approx(std::exp(-4.0)).epsilon(1e-15));
  CHECK(SmoothWeight::psi(1.0) == 0.0);
  CHECK(SmoothWeight::psi(2.5) == 0.0);

  const SmoothWeight w = build_weight();
  boost::math::quadrature::tanh_sinh<double> ts;
  const double oracle = ts.integrate([](double t) { return SmoothWeight::psi(t); }, 1.0, 2.0);
  CHECK(std::abs(w.hat_at_zero() - oracle) < 1e-13);
  CHECK(w.hat_at_zero() > 0.0);
  CHECK(std::abs(integrate_psi([](double) { return 1.0; }) - oracle) < 1e-13);

  for (const double xi : {0.3, 1.7, 5.25, 12.0}) {
    CHECK(std::abs(std::conj(w.hat(xi)) - w.hat(-xi)) < 1e-16);
  }
  // psi_hat by direct complex quadrature, independent of the envelope form
  for (const double xi : {0.0, 0.7, 3.3, 9.9}) {
    const double re = ts.integrate([&](double t) { return SmoothWeight::psi(t) * std::cos(2 * kPi * t * xi); }, 1.0, 2.0);
    const double im = ts.integrate([&](double t) { return -SmoothWeight::psi(t) * std::sin(2 * kPi * t * xi); }, 1.0, 2.0);
    CHECK(std::abs(w.hat(xi) - Complex{re, im}) < 1e-12);
  }
}

TEST_CASE("weight interpolation and decay") {
  const SmoothWeight w = build_weight();
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, w.cutoff());
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double xi = u(rng);
    worst = std::max(worst, std::abs(w.hat(xi) - SmoothWeight::hat_direct(xi)));
  }
  CHECK(worst < 1e-12);
  CHECK(w.cutoff() > 20.0);
  CHECK(w.cutoff() < 80.0);
  for (double xi = w.cutoff(); xi < w.cutoff() + 60.0; xi += 0.0137) {
    CHECK(std::abs(SmoothWeight::hat_direct(xi)) < 1e-12);
  }
  const SmoothWeight tight = build_weight(1e-14);
  CHECK(tight.cutoff() > w.cutoff());
}

TEST_CASE("residue_at on simple and double poles") {
  CHECK(std::abs(residue_at([](Complex s) { return 1.0 / s; }, {0.0, 0.05, 64}) - 1.0) < 1e-14);
  const Complex r = residue_at([](Complex s) { return 1.0 / ((s - 0.1) * (s + 0.3)); }, {0.1, 0.05, 64});
  CHECK(std::abs(r - 2.5) < 1e-10 * 2.5);
  // zeta(1+s)/s = 1/s^2 + gamma/s + ...
  const Complex g = residue_at([](Complex s) { return zeta(1.0 + s) / s; }, {0.0, 0.05, 64});
  CHECK(std::abs(g - kEulerGamma) < 1e-10);
  // X^s/s zeta(1 - delta - s) at s = -delta: zeta ~ -1/(s + delta), so the residue is X^{-delta}/delta.
  const double X = 100.0, delta = 0.03;
  const Complex h = residue_at([&](Complex s) { return std::pow(X, s) / s * zeta(1.0 - delta - s); },
                               {-delta, 0.01, 64});
  CHECK(std::abs(h - std::pow(X, -delta) / delta) < 1e-10 * std::pow(X, -delta) / delta);
  CHECK_THROWS_AS(residue_at([](Complex) { return Complex{std::nan(""), 0.0}; }, {0.0, 0.1, 64}),
                  EvaluationError);
}

TEST_CASE("arithmetic sieve") {
  const ArithmeticSieve s = build_sieve(1000);
  CHECK(s.mobius(1) == 1);
  CHECK(s.totient(1) == 1);
  CHECK(s.mobius(6) == 1);
  CHECK(s.mobius(4) == 0);
  CHECK(s.mobius(30) == -1);
  CHECK(s.totient(12) == 4);

  // brute-force Mobius by factorization, Mertens sum
  long mertens = 0, brute = 0;
  for (std::uint64_t n = 1; n <= 1000; ++n) {
    mertens += s.mobius(n);
    std::uint64_t m = n;
    int sign = 1;
    bool square = false;
    for (std::uint64_t p = 2; p <= m; ++p) {
      if (m % p) continue;
      m /= p;
      sign = -sign;
      if (m % p == 0) square = true;
      while (m % p == 0) m /= p;
    }
    brute += square ? 0 : sign;
    std::uint64_t phi = 0;
    for (std::uint64_t k = 1; k <= n; ++k) phi += std::gcd(k, n) == 1;
    CHECK(s.totient(n) == phi);
    int mu_sum = 0;
    for (const auto d : s.divisors(n)) mu_sum += s.mobius(d);
    CHECK(mu_sum == (n == 1 ? 1 : 0));
  }
  CHECK(mertens == brute);
  CHECK(mertens == 2);
  CHECK(s.primes().size() == 168);
  CHECK(primes_up_to(1000).size() == 168);
}
