#pragma once

// Local and global evaluation of the arithmetic Euler products:
//   A(S,T)   = prod_p prod_{s,t}(1 - p^{-1-s-t}) sum_j tau_S(p^j) tau_T(p^j) p^{-j}
//   Z(S,T)   = prod_{s,t} zeta(1 + s + t)
//   g_S, G_S   the local factors of the twisted divisor averages
//   A_hat(s)   the Euler product built from G_A(1 - a_hat, .) G_B(1 - b_hat, .)

#include <cstdint>
#include <span>
#include <vector>

#include "zmw/numeric.hpp"
#include "zmw/shifts.hpp"
#include "zmw/special.hpp"

namespace zmw {

inline constexpr double kSeriesTolerance = 1e-15;

struct LocalFactor {
  std::uint64_t p = 0;
  Complex value;
  int depth = 0;           // last retained index of the j-series
  double tail_bound = 0.0;  // bound on the dropped j-series tail
};

struct EulerProduct {
  Complex value;
  double error_estimate = 0.0;  // estimated |value - infinite product|
  std::uint64_t cutoff = 0;     // primes p <= cutoff included
  std::size_t primes = 0;
};

/// Truncation depth J for sum_j b_j with |b_j| <= scale * prod_i C(j+offset+k_i-1, k_i-1) rho^j,
/// chosen so the rigorous tail bound after J is below `tol` (and J >= min_depth).
struct SeriesDepth {
  int depth;
  double tail;
};
SeriesDepth series_depth(std::span<const std::size_t> degrees, double rho, double scale,
                         double tol, int min_depth, int offset = 0);

/// prod_{a in A, b in B} zeta(1 + a + b). Throws DomainError if some
/// |a + b| < guard (pole of zeta at 1).
Complex Z_product(const ShiftSet& A, const ShiftSet& B, double guard = 1e-6);

/// Local factor of A(A,B) at p; the j-series runs until its tail bound is
/// below kSeriesTolerance (never fewer than `min_depth` terms).
LocalFactor local_A_factor(const ShiftSet& A, const ShiftSet& B, std::uint64_t p,
                           int min_depth = 8);

/// prod_{p <= P} local_A_factor, ascending p, with a tail estimate from the
/// second-order expansion log(factor) = -e2(p^{-A}) e2(p^{-B}) p^{-2} + O(p^{-3}).
EulerProduct global_A(const ShiftSet& A, const ShiftSet& B, std::uint64_t P,
                      unsigned threads = 1);

/// p-part of g_A(s, q) when p^r || q:
///   prod_a (1 - p^{-s-a}) sum_j tau_A(p^{j+r}) p^{-js}.
Complex g_local(const ShiftSet& A, Complex s, std::uint64_t p, int r);

/// G_A(s, p^r) for r = 0..max_r from the literal double divisor sum, with
/// every g_A(s, p^m) drawn from one tau_A(p^.) table.
std::vector<Complex> G_prime_powers(const ShiftSet& A, Complex s, std::uint64_t p, int max_r);

/// G_A(s, q) = sum_{d | q} mu(d)/phi(d) d^s sum_{e | d} mu(e) e^{-s} g_A(s, q e/d).
Complex G_of(const ShiftSet& A, Complex s, std::uint64_t q, const ArithmeticSieve& sieve);

/// Local factor of A_{A,B,a_hat,b_hat}(s) at p; a_hat = A[ia], b_hat = B[ib].
Complex local_A_hat(const ShiftSet& A, const ShiftSet& B, std::size_t ia, std::size_t ib,
                    Complex s, std::uint64_t p);

/// Per-prime coefficient cache for A_hat(s): the G-values do not depend on s,
/// so prod_p over many s reuses them. Valid for Re s >= min_re_s.
class HatProduct {
 public:
  HatProduct(const ShiftSet& A, const ShiftSet& B, std::size_t ia, std::size_t ib,
             std::uint64_t P, double min_re_s = -0.3);

  EulerProduct evaluate(Complex s) const;
  Complex local(std::size_t prime_index, Complex s) const;
  std::span<const std::uint32_t> primes() const { return primes_; }

 private:
  struct Prime {
    std::vector<Complex> coeff;  // sum_d coeff[d] z^d, z = p^{-1-s}
    std::vector<Complex> pair_logs;  // -(1 + a + b) log p over A' x B'
  };
  std::vector<std::uint32_t> primes_;
  std::vector<Prime> data_;
  double min_re_s_;
  std::uint64_t cutoff_;
};

EulerProduct global_A_hat(const ShiftSet& A, const ShiftSet& B, std::size_t ia, std::size_t ib,
                          Complex s, std::uint64_t P);

/// sum_{p > P} p^{-2}, approximated by 1 / (P log P).
double prime_square_tail(std::uint64_t P);

}  // namespace zmw
