#include "zmw/euler.hpp"

#include <algorithm>
#include <string>

#include "zmw/parallel.hpp"

namespace zmw {
namespace {

double binom(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return r;
}

// Largest |p^{-a}| over the set (1 for the empty set).
double max_var(const ShiftSet& A, double log_p) {
  double m = 1.0;
  bool first = true;
  for (const Complex a : A) {
    const double v = std::exp(-a.real() * log_p);
    m = first ? v : std::max(m, v);
    first = false;
  }
  return m;
}

std::vector<Complex> vars_of(const ShiftSet& A, double log_p) {
  std::vector<Complex> v;
  v.reserve(A.size());
  for (const Complex a : A) v.push_back(std::exp(-a * log_p));
  return v;
}

Complex horner(std::span<const Complex> c, Complex z) {
  Complex acc{0.0, 0.0};
  for (std::size_t i = c.size(); i-- > 0;) acc = acc * z + c[i];
  return acc;
}

}  // namespace

double prime_square_tail(std::uint64_t P) {
  const double x = static_cast<double>(P);
  return 1.0 / (x * std::log(x));
}

SeriesDepth series_depth(std::span<const std::size_t> degrees, double rho, double scale,
                         double tol, int min_depth, int offset) {
  if (!(rho < 1.0)) {
    throw DomainError("divergent local series: term ratio bound " + std::to_string(rho) +
                      " is not below 1");
  }
  auto ratio = [&](int j) {  // t_{j+1} / t_j
    double r = rho;
    const double m = static_cast<double>(j + offset);
    for (const std::size_t k : degrees) {
      if (k > 0) r *= (m + static_cast<double>(k)) / (m + 1.0);
    }
    return r;
  };
  double t = scale;
  for (const std::size_t k : degrees) {
    if (k > 0) t *= binom(static_cast<std::size_t>(offset) + k - 1, k - 1);
  }
  for (int j = 0; j < 100000; ++j) {
    const double next = t * ratio(j);  // t_{j+1}
    const double r = ratio(j + 1);
    if (r < 1.0) {
      const double tail = next / (1.0 - r);
      if (j >= min_depth && tail < tol) return {j, tail};
    }
    t = next;
  }
  throw DomainError("local series did not reach tolerance within 100000 terms");
}

Complex Z_product(const ShiftSet& A, const ShiftSet& B, double guard) {
  Complex z = 1.0;
  for (const Complex a : A) {
    for (const Complex b : B) {
      if (std::abs(a + b) < guard) {
        throw DomainError("Z product: pair (" + format_complex(a) + ", " + format_complex(b) +
                          ") puts zeta at its pole");
      }
      z *= zeta(1.0 + a + b);
    }
  }
  return z;
}

LocalFactor local_A_factor(const ShiftSet& A, const ShiftSet& B, std::uint64_t p,
                           int min_depth) {
  const double log_p = std::log(static_cast<double>(p));
  const double rho = max_var(A, log_p) * max_var(B, log_p) / static_cast<double>(p);
  const std::size_t degs[] = {A.size(), B.size()};
  const auto [depth, tail] = series_depth(degs, rho, 1.0, kSeriesTolerance, min_depth);

  const auto xa = vars_of(A, log_p);
  const auto xb = vars_of(B, log_p);
  const auto ta = complete_homogeneous(xa, depth);
  const auto tb = complete_homogeneous(xb, depth);
  std::vector<Complex> c(static_cast<std::size_t>(depth) + 1);
  for (std::size_t j = 0; j < c.size(); ++j) c[j] = ta[j] * tb[j];
  const Complex series = horner(c, 1.0 / static_cast<double>(p));

  Complex pre = 1.0;
  for (const Complex x : xa)
    for (const Complex y : xb) pre *= 1.0 - x * y / static_cast<double>(p);
  return {p, pre * series, depth, tail};
}

EulerProduct global_A(const ShiftSet& A, const ShiftSet& B, std::uint64_t P, unsigned threads) {
  if (P < 2) throw DomainError("Euler product cutoff must be at least 2");
  const auto primes = primes_up_to(P);
  constexpr std::size_t kChunk = 256;
  const std::size_t chunks = (primes.size() + kChunk - 1) / kChunk;
  std::vector<Complex> partial(chunks, Complex{1.0, 0.0});
  parallel_chunks(chunks, threads, [&](std::size_t c) {
    Complex prod = 1.0;
    const std::size_t end = std::min(primes.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) prod *= local_A_factor(A, B, primes[i]).value;
    partial[c] = prod;
  });
  Complex value = 1.0;
  for (const Complex v : partial) value *= v;

  // |c2(p)| <= sum over pairs of p^{-Re(a_i + a_j + b_k + b_l)}; evaluate at P
  // and let it grow like (p/P)^g over the tail.
  double c2 = 0.0;
  double growth = 0.0;
  const double log_P = std::log(static_cast<double>(P));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = i + 1; j < A.size(); ++j)
      for (std::size_t k = 0; k < B.size(); ++k)
        for (std::size_t l = k + 1; l < B.size(); ++l) {
          const double re = (A[i] + A[j] + B[k] + B[l]).real();
          c2 += std::exp(-re * log_P);
          growth = std::max(growth, -re);
        }
  const double tail = c2 * prime_square_tail(P) / std::max(0.05, 1.0 - growth);
  return {value, 1.5 * std::abs(value) * tail, P, primes.size()};
}

namespace {

// g_A(s, p^m) for m = 0..max_m from a single tau table.
std::vector<Complex> g_sequence(const ShiftSet& A, Complex s, std::uint64_t p, int max_m) {
  const double log_p = std::log(static_cast<double>(p));
  const double mvar = max_var(A, log_p);
  const double rho = mvar * std::exp(-s.real() * log_p);
  const std::size_t degs[] = {A.size()};
  // Bounds are relative to |p^{-A}|^m; the term ratio is worst at m = 0.
  const int depth =
      std::max(series_depth(degs, rho, 1.0, kSeriesTolerance * 1e-2, 8, 0).depth,
               series_depth(degs, rho, 1.0, kSeriesTolerance * 1e-2, 8, max_m).depth);
  const auto xa = vars_of(A, log_p);
  const auto tau = complete_homogeneous(xa, max_m + depth);
  const Complex z = std::exp(-s * log_p);
  Complex pre = 1.0;
  for (const Complex x : xa) pre *= 1.0 - x * z;

  std::vector<Complex> g(static_cast<std::size_t>(max_m) + 1);
  for (int m = 0; m <= max_m; ++m) {
    Complex acc{0.0, 0.0};
    for (int j = depth; j >= 0; --j) acc = acc * z + tau[static_cast<std::size_t>(j + m)];
    g[static_cast<std::size_t>(m)] = pre * acc;
  }
  return g;
}

}  // namespace

Complex g_local(const ShiftSet& A, Complex s, std::uint64_t p, int r) {
  if (r < 0) throw DomainError("g_local: exponent must be non-negative");
  return g_sequence(A, s, p, r)[static_cast<std::size_t>(r)];
}

std::vector<Complex> G_prime_powers(const ShiftSet& A, Complex s, std::uint64_t p, int max_r) {
  const auto g = g_sequence(A, s, p, max_r);
  const double pd = static_cast<double>(p);
  const Complex p_s = std::exp(s * std::log(pd));  // p^s
  std::vector<Complex> G(g.size());
  G[0] = 1.0;
  for (std::size_t r = 1; r < g.size(); ++r) {
    // d = 1: g(p^r).  d = p: mu(p)/phi(p) p^s [g(p^{r-1}) + mu(p) p^{-s} g(p^r)].
    G[r] = g[r] - p_s / (pd - 1.0) * (g[r - 1] - g[r] / p_s);
  }
  return G;
}

Complex G_of(const ShiftSet& A, Complex s, std::uint64_t q, const ArithmeticSieve& sieve) {
  if (q == 0) throw DomainError("G_of: q must be positive");
  if (q > sieve.limit()) throw BoundsError("G_of: q exceeds sieve limit");
  const auto fac = sieve.factor(q);
  // Only exponents q_p - 1 and q_p occur in q e / d.
  std::vector<Complex> g_full(fac.size()), g_less(fac.size());
  std::vector<std::uint64_t> full_power(fac.size(), 1);
  for (std::size_t i = 0; i < fac.size(); ++i) {
    for (int k = 0; k < fac[i].second; ++k) full_power[i] *= fac[i].first;
    const auto g = g_sequence(A, s, fac[i].first, fac[i].second);
    g_full[i] = g.back();
    g_less[i] = g[g.size() - 2];
  }
  auto g_of = [&](std::uint64_t m) {
    // m = q e / d; its exponent at p_i is q_p or q_p - 1.
    Complex prod = 1.0;
    for (std::size_t i = 0; i < fac.size(); ++i) {
      const bool reduced = (m % full_power[i] != 0);
      prod *= reduced ? g_less[i] : g_full[i];
    }
    return prod;
  };
  CompensatedSum outer;
  for (const std::uint64_t d : sieve.divisors(q)) {
    const int mu_d = sieve.mobius(d);
    if (mu_d == 0) continue;
    const Complex d_s = std::exp(s * std::log(static_cast<double>(d)));
    CompensatedSum inner;
    for (const std::uint64_t e : sieve.divisors(d)) {
      const int mu_e = sieve.mobius(e);
      if (mu_e == 0) continue;
      const Complex e_s = std::exp(-s * std::log(static_cast<double>(e)));
      inner += static_cast<double>(mu_e) * e_s * g_of(q / d * e);
    }
    outer += static_cast<double>(mu_d) / static_cast<double>(sieve.totient(d)) * d_s *
             inner.value();
  }
  return outer.value();
}

namespace {

// Coefficients c_d of sum_d c_d z^d, z = p^{-1-s}, for the A_hat local factor:
//   c_d = G_A(d) G_B(d) - p^{-(2 - a_hat - b_hat)} G_A(d+1) G_B(d+1).
std::vector<Complex> hat_coefficients(const ShiftSet& A, const ShiftSet& B, std::size_t ia,
                                      std::size_t ib, std::uint64_t p, double min_re_s) {
  const Complex ah = A[ia];
  const Complex bh = B[ib];
  const double log_p = std::log(static_cast<double>(p));
  const double rho =
      max_var(A, log_p) * max_var(B, log_p) * std::exp(-(1.0 + min_re_s) * log_p);
  const std::size_t degs[] = {A.size(), B.size()};
  const int depth = series_depth(degs, rho, 1.0, kSeriesTolerance * 1e-2, 8).depth;
  const auto GA = G_prime_powers(A, 1.0 - ah, p, depth + 1);
  const auto GB = G_prime_powers(B, 1.0 - bh, p, depth + 1);
  const Complex q_weight = std::exp(-(2.0 - ah - bh) * log_p);
  std::vector<Complex> c(static_cast<std::size_t>(depth) + 1);
  for (std::size_t d = 0; d < c.size(); ++d) {
    c[d] = GA[d] * GB[d] - q_weight * GA[d + 1] * GB[d + 1];
  }
  return c;
}

std::vector<Complex> hat_pair_logs(const ShiftSet& A, const ShiftSet& B, std::size_t ia,
                                   std::size_t ib, double log_p) {
  std::vector<Complex> out;
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (i == ia) continue;
    for (std::size_t j = 0; j < B.size(); ++j) {
      if (j == ib) continue;
      out.push_back(-(1.0 + A[i] + B[j]) * log_p);
    }
  }
  return out;
}

Complex hat_local_value(std::span<const Complex> coeff, std::span<const Complex> pair_logs,
                        double log_p, Complex s) {
  Complex pre = 1.0;
  const Complex shift = -s * log_p;
  for (const Complex l : pair_logs) pre *= 1.0 - std::exp(l + shift);
  return pre * horner(coeff, std::exp(-(1.0 + s) * log_p));
}

}  // namespace

Complex local_A_hat(const ShiftSet& A, const ShiftSet& B, std::size_t ia, std::size_t ib,
                    Complex s, std::uint64_t p) {
  if (ia >= A.size() || ib >= B.size()) throw DomainError("local_A_hat: hat index out of range");
  if (s.real() <= -0.5) throw DomainError("local_A_hat: needs Re s > -1/2");
  const double log_p = std::log(static_cast<double>(p));
  const auto c = hat_coefficients(A, B, ia, ib, p, s.real());
  const auto logs = hat_pair_logs(A, B, ia, ib, log_p);
  return hat_local_value(c, logs, log_p, s);
}

HatProduct::HatProduct(const ShiftSet& A, const ShiftSet& B, std::size_t ia, std::size_t ib,
                       std::uint64_t P, double min_re_s)
    : primes_(primes_up_to(P)), min_re_s_(min_re_s), cutoff_(P) {
  if (ia >= A.size() || ib >= B.size()) throw DomainError("A_hat: hat index out of range");
  if (min_re_s <= -0.5) throw DomainError("A_hat: needs Re s > -1/2");
  data_.reserve(primes_.size());
  for (const std::uint32_t p : primes_) {
    const double log_p = std::log(static_cast<double>(p));
    data_.push_back({hat_coefficients(A, B, ia, ib, p, min_re_s), hat_pair_logs(A, B, ia, ib, log_p)});
  }
}

Complex HatProduct::local(std::size_t i, Complex s) const {
  const double log_p = std::log(static_cast<double>(primes_[i]));
  return hat_local_value(data_[i].coeff, data_[i].pair_logs, log_p, s);
}

EulerProduct HatProduct::evaluate(Complex s) const {
  if (s.real() < min_re_s_) throw DomainError("A_hat: Re s below the precomputed range");
  Complex value = 1.0;
  double c = 0.0;
  const std::size_t n = primes_.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Complex f = local(i, s);
    value *= f;
    if (i + 10 >= n) {
      const double p = primes_[i];
      c = std::max(c, std::abs(std::log(f)) * p * p);
    }
  }
  return {value, 1.5 * std::abs(value) * c * prime_square_tail(cutoff_), cutoff_, n};
}

EulerProduct global_A_hat(const ShiftSet& A, const ShiftSet& B, std::size_t ia, std::size_t ib,
                          Complex s, std::uint64_t P) {
  return HatProduct(A, B, ia, ib, P, std::min(s.real(), 0.0) - 1e-9).evaluate(s);
}

}  // namespace zmw
