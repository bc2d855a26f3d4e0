#include "zmw/special.hpp"

#include <array>
#include <boost/math/quadrature/gauss.hpp>
#include <new>
#include <string>

namespace zmw {
namespace {

// B_{2k} / (2k)!. Exact Bernoulli numbers for k <= 10; beyond that
// B_{2k}/(2k)! = 2 (-1)^{k+1} zeta(2k) / (2 pi)^{2k} with zeta(2k) summed directly.
const std::array<double, 60>& bernoulli_ratios() {
  static const std::array<double, 60> table = [] {
    constexpr double exact[10] = {1.0 / 6,          -1.0 / 30,      1.0 / 42,        -1.0 / 30,
                                  5.0 / 66,         -691.0 / 2730,  7.0 / 6,         -3617.0 / 510,
                                  43867.0 / 798,    -174611.0 / 330};
    std::array<double, 60> t{};
    double factorial = 1.0;
    for (int k = 1; k <= 60; ++k) {
      factorial *= (2.0 * k - 1.0) * (2.0 * k);
      if (k <= 10) {
        t[static_cast<std::size_t>(k - 1)] = exact[k - 1] / factorial;
        continue;
      }
      double z = 0.0;
      for (int n = 60; n >= 1; --n) z += std::pow(static_cast<double>(n), -2.0 * k);
      const double sign = (k % 2 == 1) ? 1.0 : -1.0;
      t[static_cast<std::size_t>(k - 1)] = sign * 2.0 * z / std::pow(2.0 * kPi, 2.0 * k);
    }
    return t;
  }();
  return table;
}

Complex log_sin_pi(Complex z) {
  const Complex w = kPi * z;
  const Complex i{0.0, 1.0};
  if (w.imag() > 20.0) return -i * w + std::log((1.0 - std::exp(2.0 * i * w)) * (i / 2.0));
  if (w.imag() < -20.0) return i * w + std::log((std::exp(-2.0 * i * w) - 1.0) * (i / 2.0));
  return std::log(std::sin(w));
}

}  // namespace

Complex zeta_euler_maclaurin(Complex s) {
  if (s == Complex{1.0, 0.0}) throw DomainError("zeta: pole at s = 1");
  const double mag = std::abs(s);
  const int n_cut = 15 + static_cast<int>(std::ceil(0.5 * mag));
  const double big_n = n_cut;

  CompensatedSum sum;
  for (int n = n_cut - 1; n >= 1; --n) sum += pow_neg(n, s);
  const Complex n_pow = pow_neg(big_n, s);  // N^{-s}
  sum += big_n * n_pow / (s - 1.0);
  sum += 0.5 * n_pow;

  // Tail: sum_k B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}.
  const auto& bern = bernoulli_ratios();
  Complex rising = s;  // s (s+1) ... (s+2k-2)
  Complex npow = n_pow / big_n;
  const double inv_n2 = 1.0 / (big_n * big_n);
  double last = 1e300;
  for (int k = 1; k <= 60; ++k) {
    const Complex term = bern[static_cast<std::size_t>(k - 1)] * rising * npow;
    const double t = std::abs(term);
    sum += term;
    if (t < 1e-18 * std::abs(sum.value()) || (t > last && k > 4)) break;
    last = t;
    rising *= (s + (2.0 * k - 1.0)) * (s + 2.0 * k);
    npow *= inv_n2;
  }
  return sum.value();
}

Complex log_gamma(Complex z) {
  if (z.real() < 0.5) {
    return std::log(kPi) - log_sin_pi(z) - log_gamma(1.0 - z);
  }
  static constexpr std::array<double, 9> c = {
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  Complex x = c[0];
  for (std::size_t i = 1; i < c.size(); ++i) x += c[i] / (z + static_cast<double>(i));
  const Complex t = z + 7.5;
  return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

Complex chi(Complex s) {
  // 2^s pi^{s-1} sin(pi s / 2) Gamma(1 - s)
  const Complex log_val = s * std::log(2.0) + (s - 1.0) * std::log(kPi) + log_sin_pi(s / 2.0) +
                          log_gamma(1.0 - s);
  return std::exp(log_val);
}

Complex zeta(Complex s) {
  if (s == Complex{1.0, 0.0}) throw DomainError("zeta: pole at s = 1");
  if (s.real() < 0.5 && std::abs(s) > 0.5) return chi(s) * zeta_euler_maclaurin(1.0 - s);
  return zeta_euler_maclaurin(s);
}

// ---------------------------------------------------------------------------
// Smooth weight

double SmoothWeight::psi(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  return std::exp(-1.0 / ((t - 1.0) * (2.0 - t)));
}

double SmoothWeight::envelope_direct(double xi, int nodes) {
  // R(xi) = int_{-1/2}^{1/2} psi(3/2 + x) cos(2 pi x xi) dx, trapezoid on
  // x_j = -1/2 + j/M. Aliasing error is sum_{k != 0} R(xi + kM).
  const double h = 1.0 / nodes;
  double sum = 0.0;
  for (int j = nodes / 2; j >= 1; --j) {
    const double x = j * h;
    sum += 2.0 * psi(1.5 + x) * std::cos(2.0 * kPi * x * xi);
  }
  sum += psi(1.5);
  return sum * h;
}

SmoothWeight build_weight(double threshold) {
  constexpr double kMaxXi = 160.0;
  SmoothWeight w;
  w.threshold_ = threshold;
  const double step = 1.0 / w.inv_step_;
  const auto points = static_cast<std::size_t>(kMaxXi / step) + 1;

  int nodes = 512;
  for (;; nodes *= 2) {
    double change = 0.0;
    for (const double xi : {0.0, 1.0, 10.0, 40.0, 80.0, kMaxXi}) {
      change = std::max(change, std::abs(SmoothWeight::envelope_direct(xi, nodes) -
                                         SmoothWeight::envelope_direct(xi, 2 * nodes)));
    }
    if (change < 1e-15 || nodes >= 1 << 16) break;
  }
  w.grid_.resize(points + 1);
  for (std::size_t i = 0; i < points; ++i) {
    w.grid_[i + 1] = SmoothWeight::envelope_direct(static_cast<double>(i) * step, nodes);
  }
  w.grid_[0] = w.grid_[2];
  w.hat0_ = w.grid_[1];

  std::size_t last = 0;
  for (std::size_t i = 0; i < points; ++i) {
    if (std::abs(w.grid_[i + 1]) >= threshold) last = i;
  }
  w.cutoff_ = static_cast<double>(last + 1) * step;
  return w;
}

const PsiRule& psi_rule() {
  static const PsiRule rule = [] {
    using Gauss = boost::math::quadrature::gauss<double, 64>;
    PsiRule r;
    const auto& abscissa = Gauss::abscissa();
    const auto& weights = Gauss::weights();
    for (std::size_t i = 0; i < abscissa.size(); ++i) {
      for (const double sgn : {-1.0, 1.0}) {
        if (abscissa[i] == 0.0 && sgn < 0) continue;
        const double t = 1.5 + 0.5 * sgn * abscissa[i];
        r.t.push_back(t);
        r.w.push_back(0.5 * weights[i] * SmoothWeight::psi(t));
      }
    }
    return r;
  }();
  return rule;
}

double integrate_psi(const std::function<double(double)>& g) {
  const auto& r = psi_rule();
  double s = 0.0;
  for (std::size_t i = 0; i < r.t.size(); ++i) s += r.w[i] * g(r.t[i]);
  return s;
}

Complex integrate_psi_complex(const std::function<Complex(double)>& g) {
  const auto& r = psi_rule();
  CompensatedSum s;
  for (std::size_t i = 0; i < r.t.size(); ++i) s += r.w[i] * g(r.t[i]);
  return s.value();
}

// ---------------------------------------------------------------------------
// Contours

std::vector<Complex> contour_nodes(const ContourSpec& c) {
  if (c.radius <= 0.0 || c.nodes < 4) throw DomainError("contour needs radius > 0 and >= 4 nodes");
  std::vector<Complex> pts(static_cast<std::size_t>(c.nodes));
  for (int k = 0; k < c.nodes; ++k) {
    const double theta = 2.0 * kPi * (k + 0.5) / c.nodes;
    pts[static_cast<std::size_t>(k)] = c.center + c.radius * Complex{std::cos(theta), std::sin(theta)};
  }
  return pts;
}

Complex residue_from_samples(const ContourSpec& c, std::span<const Complex> samples) {
  // (1/2 pi i) int f ds with s = c + r e^{i theta}, ds = i r e^{i theta} dtheta
  //   = (1/N) sum_k f(s_k) r e^{i theta_k}.
  CompensatedSum sum;
  for (int k = 0; k < c.nodes; ++k) {
    const double theta = 2.0 * kPi * (k + 0.5) / c.nodes;
    const Complex f = samples[static_cast<std::size_t>(k)];
    if (!std::isfinite(f.real()) || !std::isfinite(f.imag())) {
      const Complex at = c.center + c.radius * Complex{std::cos(theta), std::sin(theta)};
      throw EvaluationError("non-finite integrand on contour at s = " + format_complex(at));
    }
    sum += f * c.radius * Complex{std::cos(theta), std::sin(theta)};
  }
  return sum.value() / static_cast<double>(c.nodes);
}

Complex residue_at(const std::function<Complex(Complex)>& f, const ContourSpec& c) {
  const auto pts = contour_nodes(c);
  std::vector<Complex> vals(pts.size());
  for (std::size_t k = 0; k < pts.size(); ++k) vals[k] = f(pts[k]);
  return residue_from_samples(c, vals);
}

// ---------------------------------------------------------------------------
// Sieve

ArithmeticSieve::ArithmeticSieve(std::uint64_t limit) : limit_(limit) {
  if (limit == 0) throw DomainError("sieve limit must be at least 1");
  if (limit > 0xFFFFFFFFull) throw ResourceError("sieve limit exceeds 32-bit range");
  try {
    mobius_.assign(limit + 1, 0);
    totient_.assign(limit + 1, 0);
    spf_.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate arithmetic sieve of " + std::to_string(limit + 1) +
                        " entries (" + std::to_string((limit + 1) * 9) + " bytes)");
  }
  mobius_[1] = 1;
  totient_[1] = 1;
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf_[i] == 0) {
      spf_[i] = static_cast<std::uint32_t>(i);
      primes_.push_back(static_cast<std::uint32_t>(i));
      mobius_[i] = -1;
      totient_[i] = static_cast<std::uint32_t>(i - 1);
    }
    for (const std::uint32_t p : primes_) {
      const std::uint64_t m = i * p;
      if (p > spf_[i] || m > limit) break;
      spf_[m] = p;
      if (p == spf_[i]) {
        mobius_[m] = 0;
        totient_[m] = totient_[i] * p;
      } else {
        mobius_[m] = static_cast<std::int8_t>(-mobius_[i]);
        totient_[m] = totient_[i] * (p - 1);
      }
    }
  }
}

std::vector<std::pair<std::uint64_t, int>> ArithmeticSieve::factor(std::uint64_t n) const {
  if (n == 0 || n > limit_) throw BoundsError("factor: " + std::to_string(n) + " outside sieve");
  std::vector<std::pair<std::uint64_t, int>> out;
  while (n > 1) {
    const std::uint64_t p = spf_[n];
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    out.emplace_back(p, e);
  }
  return out;
}

std::vector<std::uint64_t> ArithmeticSieve::divisors(std::uint64_t n) const {
  std::vector<std::uint64_t> divs = {1};
  for (const auto& [p, e] : factor(n)) {
    const std::size_t base = divs.size();
    std::uint64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) divs.push_back(divs[i] * pk);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
  std::vector<std::uint32_t> primes;
  if (limit < 2) return primes;
  std::vector<bool> composite(limit + 1, false);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
  }
  return primes;
}

}  // namespace zmw
