#include "zmw/correlation.hpp"

#include <boost/math/special_functions/legendre.hpp>
#include <cstdio>
#include <sstream>

#include "zmw/euler.hpp"
#include "zmw/parallel.hpp"

namespace zmw {
namespace {

struct GaussRule {
  std::vector<double> x, w;  // on [-1, 1]
};

GaussRule gauss_legendre(int n) {
  if (n < 1) throw DomainError("quadrature needs at least one point");
  GaussRule r;
  r.x.resize(static_cast<std::size_t>(n));
  r.w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      const double dx = boost::math::legendre_p(n, x) / boost::math::legendre_p_prime(n, x);
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = boost::math::legendre_p_prime(n, x);
    r.x[static_cast<std::size_t>(i)] = x;
    r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return r;
}

}  // namespace

Complex DensityCoefficients::at(double u) const {
  Complex s{0.0, 0.0};
  const double log_u = std::log(u);
  for (std::size_t k = 0; k < coeffs.size(); ++k) s += coeffs[k] * std::exp(-exponents[k] * log_u);
  return s;
}

DensityCoefficients density_coefficients(const ShiftSet& A, std::uint64_t q,
                                         const ArithmeticSieve& sieve) {
  A.require_distinct("P_A(u,q) needs simple poles; perturb repeated shifts");
  if (q == 0) throw DomainError("P_A: q must be positive");
  DensityCoefficients out;
  const double log_q = std::log(static_cast<double>(q));
  for (std::size_t k = 0; k < A.size(); ++k) {
    const Complex ah = A[k];
    Complex z = 1.0;
    for (std::size_t j = 0; j < A.size(); ++j) {
      if (j != k) z *= zeta(1.0 - ah + A[j]);
    }
    out.exponents.push_back(ah);
    out.coeffs.push_back(G_of(A, 1.0 - ah, q, sieve) * std::exp(ah * log_q) * z);
  }
  return out;
}

Complex P_density(const ShiftSet& A, double u, std::uint64_t q, const ArithmeticSieve& sieve) {
  return density_coefficients(A, q, sieve).at(u);
}

QSum f_density(const ShiftSet& A, const ShiftSet& B, double u, std::uint64_t d,
               std::uint64_t q_cutoff, const ArithmeticSieve& sieve) {
  if (d == 0) throw DomainError("f: d must be positive");
  if (q_cutoff * d > sieve.limit()) throw BoundsError("f: q_cutoff * d exceeds the sieve limit");
  QSum out;
  out.outside_range = static_cast<double>(d) > u;
  CompensatedSum s;
  double last_decade = 0.0;
  for (std::uint64_t q = 1; q <= q_cutoff; ++q) {
    const int mu = sieve.mobius(q);
    if (mu == 0) continue;
    const double qd = static_cast<double>(q);
    const Complex term = static_cast<double>(mu) / (qd * qd) * P_density(A, u, q * d, sieve) *
                         P_density(B, u, q * d, sieve);
    s += term;
    if (10 * q > q_cutoff) last_decade += std::abs(term);
  }
  out.value = s.value();
  out.truncation_estimate = last_decade / 9.0;
  return out;
}

Complex m_prime(const ShiftSet& A, const ShiftSet& B, double u, std::uint64_t h,
                std::uint64_t q_cutoff, const ArithmeticSieve& sieve) {
  if (h == 0) throw DomainError("m': h = 0 is the diagonal, not a correlation");
  CompensatedSum s;
  for (const std::uint64_t d : sieve.divisors(h)) {
    s += f_density(A, B, u, d, q_cutoff, sieve).value / static_cast<double>(d);
  }
  return s.value();
}

CorrelationModel::CorrelationModel(const ShiftSet& A, const ShiftSet& B, std::uint64_t h,
                                   std::uint64_t q_cutoff, const ArithmeticSieve& sieve)
    : h_(h) {
  if (h == 0) throw DomainError("m': h = 0 is the diagonal, not a correlation");
  if (q_cutoff * h > sieve.limit()) throw BoundsError("m': q_cutoff * h exceeds the sieve limit");
  const std::size_t k = A.size(), l = B.size();
  std::vector<CompensatedSum> acc(k * l);
  for (const std::uint64_t d : sieve.divisors(h)) {
    for (std::uint64_t q = 1; q <= q_cutoff; ++q) {
      const int mu = sieve.mobius(q);
      if (mu == 0) continue;
      const auto PA = density_coefficients(A, q * d, sieve);
      const auto PB = density_coefficients(B, q * d, sieve);
      const double qd = static_cast<double>(q);
      const double w = static_cast<double>(mu) / (qd * qd * static_cast<double>(d));
      std::vector<Complex> term(k * l);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < l; ++j) {
          term[i * l + j] = w * PA.coeffs[i] * PB.coeffs[j];
          acc[i * l + j] += term[i * l + j];
        }
      }
      if (10 * q > q_cutoff) last_decade_.push_back(std::move(term));
    }
  }
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      exponents_.push_back(A[i] + B[j]);
      coeffs_.push_back(acc[i * l + j].value());
    }
  }
}

Complex CorrelationModel::derivative(double t) const {
  const double log_t = std::log(t);
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < coeffs_.size(); ++i) s += coeffs_[i] * std::exp(-exponents_[i] * log_t);
  return s;
}

double CorrelationModel::truncation_estimate(double u) const {
  const double log_u = std::log(u);
  std::vector<Complex> powers;
  for (const Complex e : exponents_) powers.push_back(std::exp(-e * log_u));
  double mag = 0.0;
  for (const auto& term : last_decade_) {
    Complex v{0.0, 0.0};
    for (std::size_t i = 0; i < term.size(); ++i) v += term[i] * powers[i];
    mag += std::abs(v);
  }
  return u * mag / 9.0;
}

Complex CorrelationModel::main_term(double u, int points) const {
  if (u < 1.0) throw DomainError("m: u must be at least 1");
  const GaussRule rule = gauss_legendre(points);
  const double top = std::log(u);
  CompensatedSum s;
  for (double lo = 0.0; lo < top; lo += 1.0) {
    const double hi = std::min(top, lo + 1.0);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      const double x = mid + half * rule.x[i];
      const double t = std::exp(x);
      s += half * rule.w[i] * t * derivative(t);
    }
  }
  return s.value();
}

Complex CorrelationModel::main_term_exact(double u) const {
  const double log_u = std::log(u);
  Complex s{0.0, 0.0};
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    const Complex c = 1.0 - exponents_[i];
    s += coeffs_[i] * (std::exp(c * log_u) - 1.0) / c;
  }
  return s;
}

Complex m_main(const ShiftSet& A, const ShiftSet& B, double u, std::uint64_t h,
               std::uint64_t q_cutoff, const ArithmeticSieve& sieve, int quadrature_points) {
  return CorrelationModel(A, B, h, q_cutoff, sieve).main_term(u, quadrature_points);
}

Complex D_empirical(const ShiftedTauTable& tableA, const ShiftedTauTable& tableB, std::uint64_t u,
                    std::uint64_t h) {
  if (u > tableA.limit() || u + h > tableB.limit()) {
    throw BoundsError("D(u,h): u + h = " + std::to_string(u + h) + " exceeds the tau tables");
  }
  CompensatedSum s;
  for (std::uint64_t n = 1; n <= u; ++n) s += tableA[n] * tableB[n + h];
  return s.value();
}

void CorrelationJob::validate() const {
  if (u_max < 2) throw ValidationError("correlation: u_max must be at least 2");
  if (h_list.empty()) throw ValidationError("correlation: empty h list");
  if (q_cutoff < 50) throw ValidationError("correlation: Q_cutoff must be at least 50");
  if (quadrature_points < 2) throw ValidationError("correlation: need at least 2 quadrature points");
  const double h_cap = std::pow(static_cast<double>(u_max), 0.9);
  for (const std::uint64_t h : h_list) {
    if (h == 0 || static_cast<double>(h) > h_cap) {
      throw ValidationError("correlation: h = " + std::to_string(h) + " outside [1, u_max^0.9]");
    }
  }
  for (const std::uint64_t u : u_points) {
    if (u < 1 || u > u_max) throw ValidationError("correlation: u point outside [1, u_max]");
  }
  try {
    A.require_distinct("correlation shift set A");
    B.require_distinct("correlation shift set B");
  } catch (const DomainError& e) {
    throw ValidationError(e.what());
  }
}

std::vector<CorrelationRow> run_correlation(const CorrelationJob& job, unsigned threads) {
  job.validate();
  std::uint64_t h_max = 0;
  for (const std::uint64_t h : job.h_list) h_max = std::max(h_max, h);
  std::vector<std::uint64_t> us = job.u_points.empty() ? std::vector<std::uint64_t>{job.u_max}
                                                        : job.u_points;
  std::sort(us.begin(), us.end());
  const ArithmeticSieve sieve(job.q_cutoff * h_max);
  const auto tableA = tau_table(job.A, job.u_max + h_max);
  const auto tableB = job.B == job.A ? tableA : tau_table(job.B, job.u_max + h_max);

  std::vector<std::vector<CorrelationRow>> per_h(job.h_list.size());
  parallel_chunks(job.h_list.size(), threads, [&](std::size_t i) {
    const std::uint64_t h = job.h_list[i];
    const CorrelationModel model(job.A, job.B, h, job.q_cutoff, sieve);
    CompensatedSum d;
    std::uint64_t n = 0;
    for (const std::uint64_t u : us) {
      for (; n < u; ++n) d += tableA[n + 1] * tableB[n + 1 + h];
      CorrelationRow row;
      row.u = u;
      row.h = h;
      row.D = d.value();
      row.m = model.main_term(static_cast<double>(u), job.quadrature_points);
      row.rel_dev = std::abs(row.D - row.m) / std::abs(row.m);
      row.truncation_estimate = model.truncation_estimate(static_cast<double>(u));
      per_h[i].push_back(row);
    }
  });
  std::vector<CorrelationRow> rows;
  for (auto& v : per_h) rows.insert(rows.end(), v.begin(), v.end());
  return rows;
}

std::string correlation_csv(const std::vector<CorrelationRow>& rows) {
  std::ostringstream out;
  out << "u,h,D_real,D_imag,m_real,m_imag,rel_dev\n";
  char buf[256];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%llu,%llu,%.17g,%.17g,%.17g,%.17g,%.6e\n",
                  static_cast<unsigned long long>(r.u), static_cast<unsigned long long>(r.h),
                  r.D.real(), r.D.imag(), r.m.real(), r.m.imag(), r.rel_dev);
    out << buf;
  }
  return out.str();
}

}  // namespace zmw
