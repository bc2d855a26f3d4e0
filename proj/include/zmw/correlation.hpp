#pragma once

// Shifted divisor correlations
//   D_{A,B}(u,h) = sum_{n <= u} tau_A(n) tau_B(n+h)
// and their conjectured main term m_{A,B}(u,h), built from the twisted
// densities P_A(u,q), the q-sums f_{A,B}(u,d) and m'(u,h) = sum_{d|h} f(u,d)/d.

#include <cstdint>
#include <string>
#include <vector>

#include "zmw/numeric.hpp"
#include "zmw/shifts.hpp"
#include "zmw/special.hpp"

namespace zmw {

/// P_A(u,q) = sum_k K_k u^{-a_k}: one coefficient per shift,
///   K_k = G_A(1 - a_k, q) q^{a_k} prod_{a != a_k} zeta(1 - a_k + a).
struct DensityCoefficients {
  std::vector<Complex> exponents;  // a_k
  std::vector<Complex> coeffs;     // K_k
  Complex at(double u) const;
};

/// Requires pairwise distinct shifts (simple poles); DomainError otherwise.
DensityCoefficients density_coefficients(const ShiftSet& A, std::uint64_t q,
                                         const ArithmeticSieve& sieve);

/// Average density of sum_{n <= u} tau_A(n) e(n/q).
Complex P_density(const ShiftSet& A, double u, std::uint64_t q, const ArithmeticSieve& sieve);

struct QSum {
  Complex value;
  double truncation_estimate = 0.0;  // from the last decade of q
  bool outside_range = false;        // d > u: formula evaluated, but uncalibrated
};

/// sum_{q <= q_cutoff} mu(q)/q^2 P_A(u,qd) P_B(u,qd).
QSum f_density(const ShiftSet& A, const ShiftSet& B, double u, std::uint64_t d,
               std::uint64_t q_cutoff, const ArithmeticSieve& sieve);

/// sum_{d | h} f(u,d)/d.
Complex m_prime(const ShiftSet& A, const ShiftSet& B, double u, std::uint64_t h,
                std::uint64_t q_cutoff, const ArithmeticSieve& sieve);

/// m'(t,h) for one h, reduced to sum_{a,b} C_{ab} t^{-a-b}; the q- and d-sums
/// are done once at construction.
class CorrelationModel {
 public:
  CorrelationModel(const ShiftSet& A, const ShiftSet& B, std::uint64_t h, std::uint64_t q_cutoff,
                   const ArithmeticSieve& sieve);

  Complex derivative(double t) const;
  /// int_1^u m'(t) dt, Gauss-Legendre with `points` nodes on each
  /// unit panel in log t.
  Complex main_term(double u, int points = 16) const;
  /// Same integral in closed form, for cross-checks.
  Complex main_term_exact(double u) const;
  /// Estimated |m(u) - m_infinity(u)| from the q-sum cutoff: u |m'_tail(u)|,
  /// with the tail sized by the last decade of q.
  double truncation_estimate(double u) const;
  std::uint64_t h() const { return h_; }

 private:
  std::vector<Complex> exponents_;  // a + b
  std::vector<Complex> coeffs_;
  std::vector<std::vector<Complex>> last_decade_;  // per (d, q) term, its C_{ab}
  std::uint64_t h_;
};

Complex m_main(const ShiftSet& A, const ShiftSet& B, double u, std::uint64_t h,
               std::uint64_t q_cutoff, const ArithmeticSieve& sieve, int quadrature_points = 16);

/// sum_{n <= u} tau_A(n) tau_B(n+h), compensated.
Complex D_empirical(const ShiftedTauTable& tableA, const ShiftedTauTable& tableB, std::uint64_t u,
                    std::uint64_t h);

struct CorrelationJob {
  ShiftSet A, B;
  std::uint64_t u_max = 0;
  std::vector<std::uint64_t> u_points;  // evaluation points <= u_max; empty means {u_max}
  std::vector<std::uint64_t> h_list;
  std::uint64_t q_cutoff = 400;
  int quadrature_points = 16;

  /// Throws ValidationError: h in [1, u_max^0.9], q_cutoff >= 50, distinct shifts.
  void validate() const;
};

struct CorrelationRow {
  std::uint64_t u = 0, h = 0;
  Complex D, m;
  double rel_dev = 0.0;
  double truncation_estimate = 0.0;
};

/// Rows ordered by h (job order), then u ascending. Parallel over h.
std::vector<CorrelationRow> run_correlation(const CorrelationJob& job, unsigned threads = 1);

std::string correlation_csv(const std::vector<CorrelationRow>& rows);

}  // namespace zmw
