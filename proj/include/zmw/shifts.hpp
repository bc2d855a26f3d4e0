#pragma once

// Shift sets and the shifted divisor function tau_A(n), the Dirichlet
// coefficients of prod_{a in A} zeta(s + a).

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "zmw/numeric.hpp"

namespace zmw {

struct ShiftRules {
  double radius = 0.25;          // |shift| bound for user-supplied sets
  double min_separation = 1e-6;  // pairwise distance floor for distinct sets
  std::size_t max_size = 8;
};

/// Ordered finite set of small complex shifts.
///
/// The validating constructor enforces the radius bound and pairwise
/// separation. `multiset` relaxes separation (repeated shifts are legal for
/// the purely arithmetic quantities: tau, local Euler factors, Dirichlet
/// series). Derived sets (translates, unions, removals) skip the radius
/// check, since they are produced internally at contour points and
/// translation parameters far from the origin.
class ShiftSet {
 public:
  ShiftSet() = default;
  explicit ShiftSet(std::vector<Complex> shifts, const ShiftRules& rules = {});
  static ShiftSet multiset(std::vector<Complex> shifts, const ShiftRules& rules = {});
  static ShiftSet real(std::initializer_list<double> shifts);

  std::size_t size() const { return shifts_.size(); }
  bool empty() const { return shifts_.empty(); }
  Complex operator[](std::size_t i) const { return shifts_[i]; }
  auto begin() const { return shifts_.begin(); }
  auto end() const { return shifts_.end(); }
  std::span<const Complex> values() const { return shifts_; }

  /// True when all shifts are at least `sep` apart.
  bool distinct(double sep = 1e-6) const;
  /// Throws DomainError naming `context` when two shifts (nearly) coincide.
  void require_distinct(std::string_view context, double sep = 1e-6) const;
  bool all_real() const;
  double max_abs_real() const;

  ShiftSet without(std::size_t index) const;  // A - {a_index}
  ShiftSet with(Complex shift) const;         // A u {shift}
  ShiftSet translated(Complex w) const;       // A_w
  ShiftSet conjugated() const;

  /// Equality of the sorted entry sequences.
  friend bool operator==(const ShiftSet& a, const ShiftSet& b);

 private:
  struct Unchecked {};
  ShiftSet(Unchecked, std::vector<Complex> shifts);
  std::vector<Complex> shifts_;
};

/// tau_A(p^j) for j = 0..depth: the complete homogeneous symmetric
/// polynomials of the variables p^(-a), a in A. Built by adding one shift at
/// a time through tau_A(p^r) = tau_{A'}(p^r) + p^(-a) tau_A(p^(r-1)).
std::vector<Complex> tau_prime_powers(const ShiftSet& shifts, std::uint64_t p, int depth);

/// Same, from precomputed variables x_i = p^(-a_i).
std::vector<Complex> complete_homogeneous(std::span<const Complex> vars, int depth);

/// Values tau_A(n) for 1 <= n <= N. Immutable after construction.
/// Memory: 16 bytes per entry plus a 4 byte/entry sieve during the build.
class ShiftedTauTable {
 public:
  ShiftedTauTable(ShiftSet shifts, std::uint64_t limit);

  const ShiftSet& shifts() const { return shifts_; }
  std::uint64_t limit() const { return limit_; }
  /// tau_A(n) for 1 <= n <= limit (unchecked).
  Complex operator[](std::uint64_t n) const { return values_[n]; }
  Complex at(std::uint64_t n) const;
  /// Backing storage; index 0 is unused and holds zero.
  std::span<const Complex> data() const { return values_; }

  void write_binary(const std::filesystem::path& path) const;
  static ShiftedTauTable read_binary(const std::filesystem::path& path);

 private:
  ShiftedTauTable(ShiftSet shifts, std::vector<Complex> values);
  ShiftSet shifts_;
  std::uint64_t limit_ = 0;
  std::vector<Complex> values_;
};

inline ShiftedTauTable tau_table(const ShiftSet& shifts, std::uint64_t limit) {
  return ShiftedTauTable(shifts, limit);
}

/// tau_A(n) by trial division, without building a table.
Complex tau_at(const ShiftSet& shifts, std::uint64_t n);

/// Smallest-prime-factor sieve (linear sieve) up to `limit`; spf[0] = spf[1] = 0.
std::vector<std::uint32_t> smallest_prime_factors(std::uint64_t limit);

}  // namespace zmw
