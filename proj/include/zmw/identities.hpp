#pragma once

// Numeric checks of the p-local identities behind the one-swap term, plus the
// translation invariance of A and the Dirichlet series for tau_A tau_B.
// Each check evaluates its two sides along separate code paths and records
// residual(lhs, rhs) for every term it compares.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "zmw/euler.hpp"

namespace zmw {

struct IdentityCheck {
  IdentityCheck() = default;
  IdentityCheck(std::string n) : name(std::move(n)) {}

  std::string name;
  double max_residual = 0.0;
  double sum_residual = 0.0;
  std::size_t count = 0;
  Complex worst_lhs, worst_rhs;

  void record(Complex lhs, Complex rhs);
  void merge(const IdentityCheck& other);
  double mean_residual() const { return count ? sum_residual / static_cast<double>(count) : 0.0; }
};

/// tau_A(p^r) = tau_{A - {a}}(p^r) + p^{-a} tau_A(p^{r-1}) for each a in A, 1 <= r <= R.
IdentityCheck check_tauid(const ShiftSet& A, std::uint64_t p, int R);

/// sum_{d <= r} p^{(r-d) b} tau_{A'}(p^d) = tau_{A' u {-b}}(p^r) for 0 <= r <= R.
IdentityCheck check_convolution_id(const ShiftSet& A_prime, Complex b_hat, std::uint64_t p, int R);

/// G_A(1 - a_hat, p^r) from G_of against
///   prod_{a in A'} (1 - p^{-1 + a_hat - a}) sum_j tau_{A'}(p^{j+r}) p^{-j(1 - a_hat)},
/// 1 <= r <= R, a_hat = A[ia]. Needs p^R <= 10^7 (the sieve behind G_of).
IdentityCheck check_G_closed_form(const ShiftSet& A, std::size_t ia, std::uint64_t p, int R);

struct LocalIdentityReport {
  IdentityCheck at_zero;   // prefactors times tau series against the G double sum
  IdentityCheck shifted;   // local_A_hat(s) against the swapped-set local factor
};

/// Both forms at p; the shifted form at every s in `s_values`.
LocalIdentityReport check_local_identity(const ShiftSet& A, const ShiftSet& B, std::size_t ia,
                                         std::size_t ib, std::uint64_t p,
                                         const std::vector<Complex>& s_values);

struct TelescopingReport {
  IdentityCheck splitting;      // (i) two-term split of the G products
  IdentityCheck g_difference;   // (ii) G(p^d) - p^{-1+a} G(p^{d+1}) = prefactor tau_{A'}(p^d)
  IdentityCheck rearrangement;  // (iii) anti-diagonals of the (d, j) sum
  IdentityCheck product;        // (iv) the telescoping tau products
};

TelescopingReport check_intermediate_telescoping(const ShiftSet& A, const ShiftSet& B,
                                                 std::size_t ia, std::size_t ib,
                                                 std::uint64_t p, int R);

/// A_p(A_w, B_z) against A_p(A_{w+z}, B).
IdentityCheck check_translation_identity(const ShiftSet& A, const ShiftSet& B, Complex w,
                                         Complex z, std::uint64_t p);
/// Same for the products over p <= P.
IdentityCheck check_translation_identity_global(const ShiftSet& A, const ShiftSet& B, Complex w,
                                                Complex z, std::uint64_t P);

struct DirichletCheck {
  Complex partial_sum;      // sum_{n <= N} tau_A(n) tau_B(n) n^{-1-s}
  Complex sum_tail;         // estimated sum over n > N
  Complex product;          // A(A_s, B) Z(A_s, B) over p <= P
  double product_error = 0.0;
  double gap = 0.0;         // |partial_sum + sum_tail - product|
  bool within_estimates() const { return gap < std::abs(sum_tail) + product_error; }
};

/// Needs Re s >= 1 and N <= 10^8.
DirichletCheck check_dirichlet_series(const ShiftSet& A, const ShiftSet& B, Complex s,
                                      std::uint64_t N, std::uint64_t P, unsigned threads = 1);

struct IdentitySuiteConfig {
  std::uint64_t seed = 7;
  std::size_t draws = 100;
  std::vector<std::uint64_t> primes{2, 3, 5, 7};
  std::size_t max_size = 3;
  double radius = 0.1;
  double separation = 1e-3;
  std::size_t first_draw = 0;
  int depth = 10;         // R for tau, convolution and telescoping checks
  int G_depth = 4;        // R for the G closed form
  std::uint64_t translation_P = 10000;
  double tolerance = 1e-9;
  double translation_tolerance = 1e-12;  // local; the global check uses `tolerance`
};

struct IdentityDraw {
  std::size_t index = 0;
  ShiftSet A, B;
  std::size_t ia = 0, ib = 0;
  std::uint64_t p = 2;
  Complex s, w, z;
};

/// The draw is a function of (seed, index) alone.
IdentityDraw make_draw(const IdentitySuiteConfig& cfg, std::size_t index);

struct IdentityFailure {
  IdentityDraw draw;
  std::string identity;
  double residual = 0.0;
};

struct IdentitySuiteReport {
  IdentitySuiteConfig config;
  std::vector<IdentityCheck> checks;  // one per identity, fixed order
  std::vector<IdentityFailure> failures;
  double seconds = 0.0;
  bool passed() const { return failures.empty(); }
};

IdentitySuiteReport run_identity_suite(const IdentitySuiteConfig& cfg, unsigned threads = 1);

/// Config that replays one draw (first_draw = index, draws = 1), with the
/// drawn values echoed for reading.
nlohmann::json reproducer_json(const IdentitySuiteConfig& cfg, const IdentityDraw& draw);
nlohmann::json suite_json(const IdentitySuiteReport& r);
nlohmann::json dirichlet_json(const DirichletCheck& c);

}  // namespace zmw
