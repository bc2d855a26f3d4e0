#pragma once

// Conjectural side of the shifted second-moment comparison: the recipe sum
// over swaps, the diagonal term of the Dirichlet-polynomial mean square and
// the one-swap terms evaluated by residues.

#include <cstdint>
#include <string>
#include <vector>

#include "zmw/numeric.hpp"
#include "zmw/shifts.hpp"
#include "zmw/special.hpp"

namespace zmw {

struct SwapTerm {
  std::vector<std::size_t> U, V;  // indices into A and B
  Complex value;
  double error_estimate = 0.0;
};

struct RecipeResult {
  Complex value;
  std::vector<SwapTerm> terms;  // |U| ascending, then lexicographic
  double error_estimate = 0.0;
};

/// T int psi(t) sum_{|U| = |V| <= max_swaps} (tT/2pi)^{-(sum_U a + sum_V b)}
///   A(A - U + V^-, B - V + U^-) Z(same) dt, with A at prime cutoff P.
RecipeResult recipe_R(const ShiftSet& A, const ShiftSet& B, double T, std::uint64_t P,
                      int max_swaps, unsigned threads = 1);

/// T psi_hat(0) sum_{n <= X} tau_A(n) tau_B(n) / n.
Complex diagonal_term(const ShiftedTauTable& tableA, const ShiftedTauTable& tableB, double T,
                      double X, const SmoothWeight& weight);

struct OneSwapOptions {
  std::uint64_t P = 20000;  // prime cutoff of the Euler product
  int contour_nodes = 64;
  /// Evaluate the s-integrand as A Z on the swapped sets instead of through
  /// A_hat; slower, used as a cross-check.
  bool recipe_route = false;
};

struct OneSwapResult {
  std::size_t ia = 0, ib = 0;
  Complex value;
  int poles = 0;                    // residues summed
  double contour_radius = 0.0;
  double remainder_estimate = 0.0;  // the dropped integral on Re s = -1/4
  double euler_error = 0.0;         // Euler-product truncation
};

/// Poles of the s-integrand: 0, -a_hat - b_hat and -(a + b) over A' x B'.
std::vector<Complex> one_swap_poles(const ShiftSet& A, const ShiftSet& B, std::size_t ia,
                                    std::size_t ib);

/// One-swap term for (a_hat, b_hat) = (A[ia], B[ib]). Needs T <= X <= 0.99 T^2
/// and poles separated by at least 1e-4 (DomainError otherwise).
OneSwapResult one_swap_term(const ShiftSet& A, const ShiftSet& B, std::size_t ia, std::size_t ib,
                            double T, double X, const OneSwapOptions& opts = {});

struct ConjectureResult {
  Complex value;
  Complex diagonal;
  std::vector<OneSwapResult> one_swap;  // row-major over (ia, ib); empty when X < T
  double error_estimate = 0.0;
};

/// Diagonal plus, when X >= T, every one-swap term. Parallel over (ia, ib).
ConjectureResult conjectured_I(const ShiftedTauTable& tableA, const ShiftedTauTable& tableB,
                               double T, double X, const SmoothWeight& weight,
                               const OneSwapOptions& opts = {}, unsigned threads = 1);

}  // namespace zmw
