#pragma once

// I(T;X) = T sum_{m,n <= X} tau_A(m) tau_B(n) psi_hat((T/2pi) log(m/n)) / sqrt(mn)
// as a band-limited pair sum, and the report comparing it with the conjecture.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "zmw/recipe.hpp"

namespace zmw {

struct EmpiricalResult {
  Complex value;
  std::uint64_t pairs = 0;            // ordered (m, n) pairs visited, diagonal included
  double predicted_pairs = 0.0;       // from the band width
  double band = 0.0;                  // |log(m/n)| limit, 2 pi cutoff / T
  bool full_square = false;           // band wider than [1, X]: quadratic cost
};

/// Deterministic for any thread count: m is cut into fixed ranges whose
/// partial sums are reduced in order.
EmpiricalResult I_empirical(const ShiftedTauTable& tableA, const ShiftedTauTable& tableB, double T,
                            std::uint64_t X, const SmoothWeight& weight, unsigned threads = 1);

/// Predicted ordered pair count for the band |log(m/n)| <= band over [1, X]^2.
double predicted_pair_count(std::uint64_t X, double band);

struct MomentJob {
  ShiftSet A, B;
  double T = 0.0;
  std::uint64_t X = 0;
  std::uint64_t P = 20000;
  double threshold = 1e-12;  // psi_hat cutoff
  bool conjecture = true;
};

struct ExperimentReport {
  MomentJob job;
  EmpiricalResult empirical;
  ConjectureResult conjectured;
  double abs_dev = 0.0;
  double rel_dev = 0.0;
  std::vector<std::pair<std::string, double>> error_estimates;
  std::vector<std::pair<std::string, double>> timing;  // seconds per phase
};

ExperimentReport I_report(const MomentJob& job, unsigned threads = 1);

nlohmann::json report_json(const ExperimentReport& r);

}  // namespace zmw
