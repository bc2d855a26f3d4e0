#include "zmw/empirical.hpp"

#include <chrono>

#include "zmw/json_util.hpp"
#include "zmw/parallel.hpp"
#include "zmw/version.hpp"

namespace zmw {
namespace {

constexpr std::size_t kChunk = 4096;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

double predicted_pair_count(std::uint64_t X, double band) {
  // Ordered pairs in [1,X]^2 with |log(m/n)| <= band: diagonal plus twice the
  // area of {n < m <= min(X, n e^band)}.
  const double x = static_cast<double>(X);
  const double e = std::exp(band);
  const double knee = x / e;  // beyond it the window is clipped by X
  double area;
  if (knee <= 1.0) {
    area = 0.5 * (x - 1.0) * (x - 1.0);
  } else {
    area = 0.5 * (e - 1.0) * (knee * knee - 1.0) + (x - knee) * x - 0.5 * (x * x - knee * knee);
  }
  return x + 2.0 * area;
}

EmpiricalResult I_empirical(const ShiftedTauTable& tableA, const ShiftedTauTable& tableB, double T,
                            std::uint64_t X, const SmoothWeight& weight, unsigned threads) {
  if (!(T > 0.0)) throw DomainError("I: T must be positive");
  if (X > tableA.limit() || X > tableB.limit()) {
    throw BoundsError("I: X = " + std::to_string(X) + " exceeds the tau tables");
  }
  EmpiricalResult out;
  const double scale = T / (2.0 * kPi);
  const double xi_max = weight.cutoff();
  out.band = xi_max / scale;
  out.full_square = X > 0 && out.band >= std::log(static_cast<double>(X));
  out.predicted_pairs = predicted_pair_count(X, out.band);
  if (X == 0) return out;

  // psi_hat(L_m - L_n) = e^{-3 pi i L_m} e^{3 pi i L_n} R(L_m - L_n), L = scale log n,
  // so the phases ride on the coefficients and only the even real R is
  // evaluated per pair.
  const std::size_t n = static_cast<std::size_t>(X) + 1;
  std::vector<double> L(n), ar(n), ai(n), br(n), bi(n);
  for (std::size_t k = 1; k < n; ++k) {
    L[k] = scale * std::log(static_cast<double>(k));
    const double turns = std::fmod(3.0 * L[k], 2.0);  // 3 pi L = pi * turns (mod 2 pi)
    const Complex phase{std::cos(kPi * turns), -std::sin(kPi * turns)};
    const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(k));
    const Complex a = tableA[k] * inv_sqrt * phase;
    const Complex b = tableB[k] * inv_sqrt * std::conj(phase);
    ar[k] = a.real();
    ai[k] = a.imag();
    br[k] = b.real();
    bi[k] = b.imag();
  }

  const double r0 = weight.envelope(0.0);
  const std::size_t chunks = (n - 1 + kChunk - 1) / kChunk;
  std::vector<Complex> partial(chunks);
  std::vector<std::uint64_t> visits(chunks);
  parallel_chunks(chunks, threads, [&](std::size_t c) {
    const std::size_t m_begin = 1 + c * kChunk;
    const std::size_t m_end = std::min(n, m_begin + kChunk);
    // first n with L_m - L_n <= xi_max; non-decreasing in m
    std::size_t lo = 1;
    {
      const double target = L[m_begin] - xi_max;
      lo = static_cast<std::size_t>(std::lower_bound(L.begin() + 1, L.begin() + m_begin, target) - L.begin());
    }
    CompensatedSum acc;
    std::uint64_t pairs = 0;
    for (std::size_t m = m_begin; m < m_end; ++m) {
      const double lm = L[m];
      while (lo < m && lm - L[lo] > xi_max) ++lo;
      double s1r = 0.0, s1i = 0.0, s2r = 0.0, s2i = 0.0;
      for (std::size_t k = lo; k < m; ++k) {
        const double r = weight.envelope(lm - L[k]);
        s1r += br[k] * r;
        s1i += bi[k] * r;
        s2r += ar[k] * r;
        s2i += ai[k] * r;
      }
      pairs += m - lo;
      const Complex am{ar[m], ai[m]}, bm{br[m], bi[m]};
      acc += am * Complex{s1r, s1i} + bm * Complex{s2r, s2i} + r0 * am * bm;
    }
    partial[c] = acc.value();
    visits[c] = pairs;
  });
  CompensatedSum total;
  std::uint64_t pairs = 0;
  for (std::size_t c = 0; c < chunks; ++c) {
    total += partial[c];
    pairs += visits[c];
  }
  out.value = T * total.value();
  out.pairs = 2 * pairs + X;
  return out;
}

ExperimentReport I_report(const MomentJob& job, unsigned threads) {
  if (!(job.T > 0.0)) throw ValidationError("moment: T must be positive");
  if (job.X < 1) throw ValidationError("moment: X must be at least 1");
  if (job.P < 100) throw ValidationError("moment: P must be at least 100");
  ExperimentReport r;
  r.job = job;
  auto t0 = Clock::now();
  const SmoothWeight weight = build_weight(job.threshold);
  const auto tableA = tau_table(job.A, job.X);
  const auto tableB = job.B == job.A ? tableA : tau_table(job.B, job.X);
  r.timing.emplace_back("setup", seconds_since(t0));

  t0 = Clock::now();
  r.empirical = I_empirical(tableA, tableB, job.T, job.X, weight, threads);
  r.timing.emplace_back("empirical", seconds_since(t0));
  r.error_estimates.emplace_back("empirical_band_cutoff",
                                 job.threshold * job.T * r.empirical.predicted_pairs /
                                     static_cast<double>(job.X));

  if (job.conjecture) {
    t0 = Clock::now();
    OneSwapOptions opts;
    opts.P = job.P;
    r.conjectured = conjectured_I(tableA, tableB, job.T, static_cast<double>(job.X), weight, opts, threads);
    r.timing.emplace_back("conjecture", seconds_since(t0));
    double remainders = 0.0, euler = 0.0;
    for (const auto& t : r.conjectured.one_swap) {
      remainders += t.remainder_estimate;
      euler += t.euler_error;
    }
    r.error_estimates.emplace_back("one_swap_remainders", remainders);
    r.error_estimates.emplace_back("euler_products", euler);
    r.abs_dev = std::abs(r.empirical.value - r.conjectured.value);
    const double c = std::abs(r.conjectured.value);
    r.rel_dev = c > 0.0 ? r.abs_dev / c : 0.0;
  }
  return r;
}

nlohmann::json report_json(const ExperimentReport& r) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["config"] = {{"A", shifts_json(r.job.A)},
                 {"B", shifts_json(r.job.B)},
                 {"T", r.job.T},
                 {"X", r.job.X},
                 {"N", r.job.X},
                 {"P", r.job.P},
                 {"weight", {{"psi", "exp(-1/((t-1)(2-t))) on (1,2)"},
                             {"threshold", r.job.threshold}}},
                 {"conjecture", r.job.conjecture}};
  j["empirical"] = complex_json(r.empirical.value);
  j["pairs_visited"] = r.empirical.pairs;
  j["pairs_predicted"] = r.empirical.predicted_pairs;
  if (r.job.conjecture) {
    nlohmann::json swaps = nlohmann::json::array();
    for (const auto& t : r.conjectured.one_swap) {
      swaps.push_back({{"a_hat", complex_json(r.job.A[t.ia])},
                       {"b_hat", complex_json(r.job.B[t.ib])},
                       {"value", complex_json(t.value)},
                       {"poles", t.poles},
                       {"remainder_estimate", t.remainder_estimate},
                       {"euler_error", t.euler_error}});
    }
    j["conjectured"] = {{"value", complex_json(r.conjectured.value)},
                        {"diagonal", complex_json(r.conjectured.diagonal)},
                        {"one_swap", swaps}};
    j["abs_dev"] = r.abs_dev;
    j["rel_dev"] = r.rel_dev;
  }
  nlohmann::json errs = nlohmann::json::object();
  for (const auto& [k, v] : r.error_estimates) errs[k] = v;
  j["error_estimates"] = errs;
  nlohmann::json timing = nlohmann::json::object();
  for (const auto& [k, v] : r.timing) timing[k] = v;
  j["timing"] = timing;
  return j;
}

}  // namespace zmw
