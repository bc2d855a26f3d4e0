#pragma once

// Riemann zeta, complex log-gamma, the smooth weight psi with its Fourier
// transform, residues by circular contours, and the Mobius/totient sieve.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "zmw/numeric.hpp"

namespace zmw {

/// Riemann zeta. Euler-Maclaurin for Re s >= 1/2, reflection below.
/// Relative accuracy ~1e-13 for |Im s| <= 200, -10 <= Re s <= 10.
/// Throws DomainError at s = 1.
Complex zeta(Complex s);

/// Euler-Maclaurin summation with no reflection; valid for every s != 1
/// (loses accuracy for very negative Re s). Exposed for cross-checks.
Complex zeta_euler_maclaurin(Complex s);

/// log Gamma(z) (principal branch up to 2 pi i), Lanczos approximation with
/// reflection for Re z < 1/2.
Complex log_gamma(Complex z);
inline Complex gamma_complex(Complex z) { return std::exp(log_gamma(z)); }

/// chi(s) with zeta(s) = chi(s) zeta(1 - s).
Complex chi(Complex s);

/// The bump psi(t) = exp(-1/((t-1)(2-t))) on (1,2) and its Fourier transform
///   psi_hat(xi) = int psi(t) exp(-2 pi i t xi) dt.
///
/// psi is symmetric about t = 3/2, so psi_hat(xi) = exp(-3 pi i xi) R(xi)
/// with R real and even. R is tabulated on a uniform grid and read back by
/// 4-point Lagrange interpolation; beyond the cutoff |psi_hat| < threshold.
class SmoothWeight {
 public:
  static double psi(double t);

  /// psi_hat from the cached grid.
  Complex hat(double xi) const { return envelope(xi) * unit_phase(xi); }
  /// R(xi) from the cached grid; zero beyond the grid.
  double envelope(double xi) const {
    const double x = std::abs(xi) * inv_step_;
    const auto i = static_cast<std::size_t>(x);
    if (i + 3 >= grid_.size()) return 0.0;
    const double f = x - static_cast<double>(i);
    // grid_[i + 1] holds R(i * step); grid_[0] is the even ghost R(step).
    const double* g = grid_.data() + i;
    const double fm1 = f + 1.0, f1 = f - 1.0, f2 = f - 2.0;
    return -g[0] * f * f1 * f2 / 6.0 + g[1] * fm1 * f1 * f2 / 2.0 - g[2] * fm1 * f * f2 / 2.0 +
           g[3] * fm1 * f * f1 / 6.0;
  }
  /// R(xi) directly by the trapezoid rule (spectrally accurate here since
  /// psi vanishes to all orders at both ends).
  static double envelope_direct(double xi, int nodes = 1024);
  static Complex hat_direct(double xi, int nodes = 1024) {
    return envelope_direct(xi, nodes) * unit_phase(xi);
  }
  /// exp(-3 pi i xi), the phase relating psi_hat to R.
  static Complex unit_phase(double xi) {
    const double a = -3.0 * kPi * xi;
    return {std::cos(a), std::sin(a)};
  }

  double cutoff() const { return cutoff_; }
  double threshold() const { return threshold_; }
  double hat_at_zero() const { return hat0_; }
  double step() const { return 1.0 / inv_step_; }
  std::size_t grid_size() const { return grid_.size(); }

 private:
  friend SmoothWeight build_weight(double threshold);
  std::vector<double> grid_;
  double inv_step_ = 256.0;
  double cutoff_ = 0.0;
  double threshold_ = 1e-12;
  double hat0_ = 0.0;
};

/// Tabulates R on [0, 160] with step 1/256, choosing the trapezoid node
/// count by doubling until successive values agree to 1e-15, and sets the
/// cutoff to the smallest grid point beyond which |psi_hat| < threshold.
SmoothWeight build_weight(double threshold = 1e-12);

/// 64-point Gauss-Legendre on [1,2] of psi(t) g(t).
double integrate_psi(const std::function<double(double)>& g);
Complex integrate_psi_complex(const std::function<Complex(double)>& g);
/// Gauss-Legendre nodes and weights (times psi) on [1,2].
struct PsiRule {
  std::vector<double> t;
  std::vector<double> w;  // already multiplied by psi(t)
};
const PsiRule& psi_rule();

struct ContourSpec {
  Complex center{0.0, 0.0};
  double radius = 1e-3;
  int nodes = 64;
};

/// Points on the circle, in the order residue_from_samples expects.
std::vector<Complex> contour_nodes(const ContourSpec& c);
/// (1/2 pi i) times the contour integral, given f at contour_nodes(c).
Complex residue_from_samples(const ContourSpec& c, std::span<const Complex> samples);
/// (1/2 pi i) * closed integral of f over the circle (trapezoid rule).
/// For a pole of any order this is the full Laurent residue.
/// Throws EvaluationError when f is non-finite at a node.
Complex residue_at(const std::function<Complex(Complex)>& f, const ContourSpec& c);

class ArithmeticSieve {
 public:
  explicit ArithmeticSieve(std::uint64_t limit);
  std::uint64_t limit() const { return limit_; }
  int mobius(std::uint64_t n) const { return mobius_[n]; }
  std::uint64_t totient(std::uint64_t n) const { return totient_[n]; }
  std::span<const std::uint32_t> primes() const { return primes_; }
  /// Prime factorization of n <= limit as (p, e) pairs, ascending p.
  std::vector<std::pair<std::uint64_t, int>> factor(std::uint64_t n) const;
  std::vector<std::uint64_t> divisors(std::uint64_t n) const;

 private:
  std::uint64_t limit_;
  std::vector<std::int8_t> mobius_;
  std::vector<std::uint32_t> totient_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

inline ArithmeticSieve build_sieve(std::uint64_t limit) { return ArithmeticSieve(limit); }

/// Primes up to `limit`, ascending.
std::vector<std::uint32_t> primes_up_to(std::uint64_t limit);

}  // namespace zmw
