#include "zmw/identities.hpp"

#include <algorithm>
#include <chrono>
#include <random>

#include "zmw/json_util.hpp"
#include "zmw/parallel.hpp"
#include "zmw/version.hpp"

namespace zmw {
namespace {

constexpr double kTermFloor = 1e-18;

std::vector<Complex> vars(const ShiftSet& A, std::uint64_t p) {
  const double log_p = std::log(static_cast<double>(p));
  std::vector<Complex> x;
  for (const Complex a : A) x.push_back(std::exp(-a * log_p));
  return x;
}

double max_abs(const std::vector<Complex>& x) {
  double m = 0.0;
  for (const Complex v : x) m = std::max(m, std::abs(v));
  return m;
}

// tau_A(p^r), r = 0..depth, from the power sums by Newton's identities
//   r h_r = sum_{i=1}^r P_i h_{r-i};
// shares nothing with the one-shift-at-a-time recursion in tau_prime_powers.
std::vector<Complex> tau_newton(const ShiftSet& A, std::uint64_t p, int depth) {
  const auto x = vars(A, p);
  const auto n = static_cast<std::size_t>(depth) + 1;
  std::vector<Complex> P(n, 0.0), h(n, 0.0);
  for (const Complex v : x) {
    Complex pw = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
      pw *= v;
      P[i] += pw;
    }
  }
  h[0] = 1.0;
  for (std::size_t r = 1; r < n; ++r) {
    Complex acc = 0.0;
    for (std::size_t i = 1; i <= r; ++i) acc += P[i] * h[r - i];
    h[r] = acc / static_cast<double>(r);
  }
  return h;
}

// Smallest D >= 8 with (D+1)^degree rho^D below the term floor.
int depth_for(double rho, std::size_t degree, const char* what) {
  if (!(rho < 1.0)) throw DomainError(std::string(what) + ": series does not converge at this p");
  int D = 8;
  while (static_cast<double>(degree) * std::log(D + 1.0) + D * std::log(rho) > std::log(kTermFloor)) {
    if (++D > 5000) throw DomainError(std::string(what) + ": series converges too slowly");
  }
  return D;
}

Complex p_pow(std::uint64_t p, Complex e) { return std::exp(e * std::log(static_cast<double>(p))); }

// prod_{a in A'} (1 - p^{-1 + a_hat - a})
Complex hat_prefactor(const ShiftSet& Ap, Complex a_hat, std::uint64_t p) {
  Complex pre = 1.0;
  for (const Complex a : Ap) pre *= 1.0 - p_pow(p, -1.0 + a_hat - a);
  return pre;
}

void check_index(const ShiftSet& A, std::size_t i, const char* what) {
  if (i >= A.size()) throw DomainError(std::string(what) + ": hat index out of range");
}

}  // namespace

void IdentityCheck::record(Complex lhs, Complex rhs) {
  const double r = residual(lhs, rhs);
  if (r > max_residual || count == 0) {
    max_residual = r;
    worst_lhs = lhs;
    worst_rhs = rhs;
  }
  sum_residual += r;
  ++count;
}

void IdentityCheck::merge(const IdentityCheck& other) {
  if (other.count == 0) return;
  if (other.max_residual > max_residual || count == 0) {
    max_residual = other.max_residual;
    worst_lhs = other.worst_lhs;
    worst_rhs = other.worst_rhs;
  }
  sum_residual += other.sum_residual;
  count += other.count;
}

IdentityCheck check_tauid(const ShiftSet& A, std::uint64_t p, int R) {
  if (A.empty()) throw DomainError("tauid: A must be non-empty");
  IdentityCheck out{"tauid"};
  const auto t = tau_newton(A, p, R);
  for (std::size_t i = 0; i < A.size(); ++i) {
    const auto rest = tau_newton(A.without(i), p, R);
    const Complex x = p_pow(p, -A[i]);
    for (int r = 1; r <= R; ++r) out.record(t[r], rest[r] + x * t[r - 1]);
  }
  return out;
}

IdentityCheck check_convolution_id(const ShiftSet& A_prime, Complex b_hat, std::uint64_t p, int R) {
  IdentityCheck out{"convolution"};
  const auto t = tau_prime_powers(A_prime, p, R);
  const auto joined = tau_newton(A_prime.with(-b_hat), p, R);
  const Complex y = p_pow(p, b_hat);
  for (int r = 0; r <= R; ++r) {
    CompensatedSum lhs;
    Complex w = 1.0;  // p^{(r-d) b_hat}, d running down from r
    for (int d = r; d >= 0; --d) {
      lhs += w * t[d];
      w *= y;
    }
    out.record(lhs.value(), joined[r]);
  }
  return out;
}

IdentityCheck check_G_closed_form(const ShiftSet& A, std::size_t ia, std::uint64_t p, int R) {
  check_index(A, ia, "G closed form");
  if (R < 1) throw DomainError("G closed form: R must be at least 1");
  double q_max = std::pow(static_cast<double>(p), R);
  if (q_max > 1e7) throw BoundsError("G closed form: p^R above 10^7");
  IdentityCheck out{"G_closed_form"};
  const ArithmeticSieve sieve(static_cast<std::uint64_t>(std::llround(q_max)));
  const Complex ah = A[ia];
  const ShiftSet Ap = A.without(ia);
  const Complex y = p_pow(p, -(1.0 - ah));
  const double rho = std::max(max_abs(vars(Ap, p)), 1.0) * std::abs(y);
  const int J = depth_for(rho, Ap.size() + 1, "G closed form");
  const auto t = tau_newton(Ap, p, J + R);
  const Complex pre = hat_prefactor(Ap, ah, p);
  std::uint64_t q = 1;
  for (int r = 1; r <= R; ++r) {
    q *= p;
    CompensatedSum series;
    Complex yj = 1.0;
    for (int j = 0; j <= J; ++j) {
      series += t[j + r] * yj;
      yj *= y;
    }
    out.record(G_of(A, 1.0 - ah, q, sieve), pre * series.value());
  }
  return out;
}

LocalIdentityReport check_local_identity(const ShiftSet& A, const ShiftSet& B, std::size_t ia,
                                         std::size_t ib, std::uint64_t p,
                                         const std::vector<Complex>& s_values) {
  check_index(A, ia, "local identity");
  check_index(B, ib, "local identity");
  LocalIdentityReport out{{"local_identity"}, {"local_identity_s"}};
  const Complex ah = A[ia], bh = B[ib];
  const ShiftSet Ap = A.without(ia), Bp = B.without(ib);
  const ShiftSet A2 = Ap.with(-bh), B2 = Bp.with(-ah);
  const double pd = static_cast<double>(p);

  const double rho = std::max(max_abs(vars(A2, p)), 1.0) * std::max(max_abs(vars(B2, p)), 1.0) / pd;
  const int D = depth_for(rho, A.size() + B.size(), "local identity");

  // left: prefactors times sum_j tau_{A''}(p^j) tau_{B''}(p^j) p^{-j}
  const auto ta = tau_newton(A2, p, D), tb = tau_newton(B2, p, D);
  CompensatedSum series;
  double pj = 1.0;
  for (int j = 0; j <= D; ++j) {
    series += ta[j] * tb[j] * pj;
    pj /= pd;
  }
  const Complex lhs = hat_prefactor(Ap, ah, p) * hat_prefactor(Bp, bh, p) *
                      (1.0 - p_pow(p, -1.0 + ah + bh)) * series.value();

  // right: sum_{d,q} mu(p^q) G_A(1-a, p^{d+q}) G_B(1-b, p^{d+q}) p^{-d-q(2-a-b)}
  const auto GA = G_prime_powers(A, 1.0 - ah, p, D + 1);
  const auto GB = G_prime_powers(B, 1.0 - bh, p, D + 1);
  CompensatedSum rhs;
  for (int q = 0; q <= 1; ++q) {
    const Complex wq = (q == 0 ? 1.0 : -1.0) * p_pow(p, -static_cast<double>(q) * (2.0 - ah - bh));
    double pdn = 1.0;
    for (int d = 0; d <= D; ++d) {
      rhs += wq * GA[d + q] * GB[d + q] * pdn;
      pdn /= pd;
    }
  }
  out.at_zero.record(lhs, rhs.value());

  for (const Complex s : s_values) {
    const Complex hat = local_A_hat(A, B, ia, ib, s, p);
    const Complex swapped = local_A_factor(Ap.with(-bh - s), Bp.translated(s).with(-ah), p).value;
    out.shifted.record(hat, swapped);
  }
  return out;
}

TelescopingReport check_intermediate_telescoping(const ShiftSet& A, const ShiftSet& B,
                                                 std::size_t ia, std::size_t ib,
                                                 std::uint64_t p, int R) {
  check_index(A, ia, "telescoping");
  check_index(B, ib, "telescoping");
  if (R < 1) throw DomainError("telescoping: R must be at least 1");
  TelescopingReport out{{"telescoping_split"},
                        {"telescoping_g_difference"},
                        {"telescoping_rearrangement"},
                        {"telescoping_product"}};
  const Complex ah = A[ia], bh = B[ib];
  const ShiftSet Ap = A.without(ia), Bp = B.without(ib);
  const ShiftSet A2 = Ap.with(-bh), B2 = Bp.with(-ah);
  const double pd = static_cast<double>(p);
  const Complex u = p_pow(p, -1.0 + ah), v = p_pow(p, -1.0 + bh);

  const auto GA = G_prime_powers(A, 1.0 - ah, p, R + 1);
  const auto GB = G_prime_powers(B, 1.0 - bh, p, R + 1);
  const Complex preA = hat_prefactor(Ap, ah, p), preB = hat_prefactor(Bp, bh, p);
  const auto nA = tau_newton(Ap, p, R), nB = tau_newton(Bp, p, R);
  const auto nA2 = tau_newton(A2, p, R), nB2 = tau_newton(B2, p, R);
  const auto tA = tau_prime_powers(Ap, p, R), tB = tau_prime_powers(Bp, p, R);
  const auto tA2 = tau_prime_powers(A2, p, R), tB2 = tau_prime_powers(B2, p, R);

  for (int d = 0; d <= R; ++d) {
    const Complex lhs = GA[d] * GB[d] - u * v * GA[d + 1] * GB[d + 1];
    const Complex rhs = (GA[d] - u * GA[d + 1]) * GB[d] + u * GA[d + 1] * (GB[d] - v * GB[d + 1]);
    out.splitting.record(lhs, rhs);
    out.g_difference.record(GA[d] - u * GA[d + 1], preA * nA[d]);
    out.g_difference.record(GB[d] - v * GB[d + 1], preB * nB[d]);
  }

  // anti-diagonal r of sum_{d,j} tau_{A'}(p^d) p^{-d} tau_{B'}(p^{j+d}) p^{-j(1-b)}
  // against tau_{B'}(p^r) tau_{A' u {-b}}(p^r) p^{-r}, and the mirror image
  const Complex yb = p_pow(p, -(1.0 - bh)), ya = p_pow(p, -(1.0 - ah));
  double pr = 1.0;
  for (int r = 0; r <= R; ++r) {
    CompensatedSum left, right;
    double pdn = 1.0;
    for (int d = 0; d <= r; ++d) {
      left += tA[d] * pdn * tB[r] * std::pow(yb, r - d);
      right += tB[d] * pdn * tA[r] * std::pow(ya, r - d);
      pdn /= pd;
    }
    out.rearrangement.record(left.value(), nB[r] * nA2[r] * pr);
    out.rearrangement.record(right.value(), nA[r] * nB2[r] * pr);
    pr /= pd;
  }

  const Complex ab = p_pow(p, ah + bh);
  for (int r = 1; r <= R; ++r) {
    const Complex lhs = tB[r] * tA2[r] + tA[r] * tB2[r] - tA[r] * tB[r];
    const Complex rhs = nA2[r] * nB2[r] - ab * nA2[r - 1] * nB2[r - 1];
    out.product.record(lhs, rhs);
  }
  return out;
}

IdentityCheck check_translation_identity(const ShiftSet& A, const ShiftSet& B, Complex w,
                                         Complex z, std::uint64_t p) {
  IdentityCheck out{"translation_local"};
  out.record(local_A_factor(A.translated(w), B.translated(z), p).value,
             local_A_factor(A.translated(w + z), B, p).value);
  return out;
}

IdentityCheck check_translation_identity_global(const ShiftSet& A, const ShiftSet& B, Complex w,
                                                Complex z, std::uint64_t P) {
  IdentityCheck out{"translation_global"};
  out.record(global_A(A.translated(w), B.translated(z), P).value,
             global_A(A.translated(w + z), B, P).value);
  return out;
}

DirichletCheck check_dirichlet_series(const ShiftSet& A, const ShiftSet& B, Complex s,
                                      std::uint64_t N, std::uint64_t P, unsigned threads) {
  if (s.real() < 1.0) throw DomainError("Dirichlet series: needs Re s >= 1");
  if (N < 16 || N > 100000000) throw DomainError("Dirichlet series: N must lie in [16, 10^8]");
  if (A.empty() || B.empty()) throw DomainError("Dirichlet series: A and B must be non-empty");
  const auto ta = tau_table(A, N);
  const auto tb = tau_table(B, N);

  constexpr std::uint64_t kChunk = 1 << 16;
  const std::size_t chunks = static_cast<std::size_t>((N + kChunk - 1) / kChunk);
  std::vector<Complex> partial(chunks), upper(chunks);
  const std::uint64_t half = N / 2;
  parallel_chunks(chunks, threads, [&](std::size_t c) {
    const std::uint64_t lo = 1 + c * kChunk, hi = std::min<std::uint64_t>(N, lo + kChunk - 1);
    CompensatedSum acc, top;
    for (std::uint64_t n = lo; n <= hi; ++n) {
      const Complex f = ta[n] * tb[n];
      acc += f * std::exp(-(1.0 + s) * std::log(static_cast<double>(n)));
      if (n > half) top += f;
    }
    partial[c] = acc.value();
    upper[c] = top.value();
  });
  CompensatedSum sum, top;
  for (std::size_t c = 0; c < chunks; ++c) {
    sum += partial[c];
    top += upper[c];
  }

  DirichletCheck out;
  out.partial_sum = sum.value();
  // Mean density M of tau_A tau_B on (N/2, N], continued as M (log t / log N)^m
  // with m = |A||B| - 1:
  //   int_N^inf M (log t / L)^m t^{-1-s} dt = M N^{-s}/s sum_i m!/(m-i)! (sL)^{-i}
  const Complex M = top.value() / static_cast<double>(N - half);
  const double L = std::log(static_cast<double>(N));
  const int m = static_cast<int>(A.size() * B.size()) - 1;
  Complex series = 0.0, term = 1.0;
  for (int i = 0; i <= m; ++i) {
    series += term;
    term *= static_cast<double>(m - i) / (s * L);
  }
  out.sum_tail = M * std::exp(-s * L) / s * series;

  const ShiftSet As = A.translated(s);
  const auto a = global_A(As, B, P, threads);
  const Complex z = Z_product(As, B);
  out.product = a.value * z;
  out.product_error = a.error_estimate * std::abs(z);
  out.gap = std::abs(out.partial_sum + out.sum_tail - out.product);
  return out;
}

IdentityDraw make_draw(const IdentitySuiteConfig& cfg, std::size_t index) {
  if (cfg.primes.empty()) throw ValidationError("identities: prime list is empty");
  if (cfg.max_size < 1 || cfg.max_size > 8) throw ValidationError("identities: max_size must lie in [1, 8]");
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto disk = [&] {
    const double r = cfg.radius * std::sqrt(unit(rng));
    const double t = 2.0 * kPi * unit(rng);
    return Complex{r * std::cos(t), r * std::sin(t)};
  };
  auto shift_set = [&] {
    const std::size_t k = 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(cfg.max_size));
    std::vector<Complex> v;
    while (v.size() < k) {
      const Complex c = disk();
      bool ok = true;
      for (const Complex e : v) ok = ok && std::abs(c - e) >= cfg.separation;
      if (ok) v.push_back(c);
    }
    return ShiftSet(v, ShiftRules{std::max(0.25, cfg.radius), cfg.separation, 8});
  };
  IdentityDraw d;
  d.index = index;
  d.A = shift_set();
  d.B = shift_set();
  d.ia = std::min(d.A.size() - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(d.A.size())));
  d.ib = std::min(d.B.size() - 1, static_cast<std::size_t>(unit(rng) * static_cast<double>(d.B.size())));
  d.p = cfg.primes[std::min(cfg.primes.size() - 1,
                            static_cast<std::size_t>(unit(rng) * static_cast<double>(cfg.primes.size())))];
  d.s = {-0.1 + 0.3 * unit(rng), -0.1 + 0.2 * unit(rng)};
  d.w = disk();
  d.z = disk();
  return d;
}

namespace {

const std::vector<Complex> kSGrid{{-0.1, -0.1}, {-0.1, 0.1}, {0.2, -0.1}, {0.2, 0.1}, {0.05, 0.0}};

std::vector<IdentityCheck> run_draw(const IdentitySuiteConfig& cfg, const IdentityDraw& d) {
  std::vector<IdentityCheck> out;
  auto tau = check_tauid(d.A, d.p, cfg.depth);
  tau.merge(check_tauid(d.B, d.p, cfg.depth));
  out.push_back(tau);
  auto conv = check_convolution_id(d.A.without(d.ia), d.B[d.ib], d.p, cfg.depth);
  conv.merge(check_convolution_id(d.B.without(d.ib), d.A[d.ia], d.p, cfg.depth));
  out.push_back(conv);
  auto G = check_G_closed_form(d.A, d.ia, d.p, cfg.G_depth);
  G.merge(check_G_closed_form(d.B, d.ib, d.p, cfg.G_depth));
  out.push_back(G);
  auto s_values = kSGrid;
  s_values.push_back(d.s);
  const auto local = check_local_identity(d.A, d.B, d.ia, d.ib, d.p, s_values);
  out.push_back(local.at_zero);
  out.push_back(local.shifted);
  const auto tel = check_intermediate_telescoping(d.A, d.B, d.ia, d.ib, d.p, cfg.depth);
  out.push_back(tel.splitting);
  out.push_back(tel.g_difference);
  out.push_back(tel.rearrangement);
  out.push_back(tel.product);
  out.push_back(check_translation_identity(d.A, d.B, d.w, d.z, d.p));
  out.push_back(check_translation_identity_global(d.A, d.B, d.w, d.z, cfg.translation_P));
  return out;
}

using Clock = std::chrono::steady_clock;

}  // namespace

IdentitySuiteReport run_identity_suite(const IdentitySuiteConfig& cfg, unsigned threads) {
  if (cfg.draws == 0) throw ValidationError("identities: draws must be positive");
  if (cfg.depth < 1 || cfg.depth > 200) throw ValidationError("identities: depth must lie in [1, 200]");
  if (!(cfg.radius > 0.0 && cfg.radius <= 0.25)) throw ValidationError("identities: radius must lie in (0, 0.25]");
  const auto small = primes_up_to(1000);
  for (const auto p : cfg.primes) {
    if (!std::binary_search(small.begin(), small.end(), p)) {
      throw ValidationError("identities: " + std::to_string(p) + " is not a prime <= 1000");
    }
  }
  const auto t0 = Clock::now();
  IdentitySuiteReport out;
  out.config = cfg;
  std::vector<IdentityDraw> draws(cfg.draws);
  std::vector<std::vector<IdentityCheck>> results(cfg.draws);
  parallel_chunks(cfg.draws, threads, [&](std::size_t i) {
    draws[i] = make_draw(cfg, cfg.first_draw + i);
    results[i] = run_draw(cfg, draws[i]);
  });
  out.checks = results.front();
  for (auto& c : out.checks) c = IdentityCheck{c.name};
  for (std::size_t i = 0; i < cfg.draws; ++i) {
    for (std::size_t k = 0; k < out.checks.size(); ++k) {
      const auto& c = results[i][k];
      out.checks[k].merge(c);
      const double tol = c.name == "translation_local" ? cfg.translation_tolerance : cfg.tolerance;
      if (!(c.max_residual <= tol)) out.failures.push_back({draws[i], c.name, c.max_residual});
    }
  }
  out.seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return out;
}

nlohmann::json reproducer_json(const IdentitySuiteConfig& cfg, const IdentityDraw& draw) {
  return {{"schema_version", 1},
          {"seed", cfg.seed},
          {"first_draw", draw.index},
          {"draws", 1},
          {"primes", cfg.primes},
          {"max_size", cfg.max_size},
          {"radius", cfg.radius},
          {"separation", cfg.separation},
          {"depth", cfg.depth},
          {"G_depth", cfg.G_depth},
          {"translation_P", cfg.translation_P},
          {"tolerance", cfg.tolerance},
          {"drawn", {{"A", shifts_json(draw.A)},
                     {"B", shifts_json(draw.B)},
                     {"ia", draw.ia},
                     {"ib", draw.ib},
                     {"p", draw.p},
                     {"s", complex_json(draw.s)},
                     {"w", complex_json(draw.w)},
                     {"z", complex_json(draw.z)}}}};
}

nlohmann::json suite_json(const IdentitySuiteReport& r) {
  nlohmann::json j;
  j["version"] = kVersion;
  const auto& c = r.config;
  j["config"] = {{"seed", c.seed},         {"first_draw", c.first_draw}, {"draws", c.draws},
                 {"primes", c.primes},     {"max_size", c.max_size},     {"radius", c.radius},
                 {"separation", c.separation}, {"depth", c.depth},       {"G_depth", c.G_depth},
                 {"translation_P", c.translation_P}, {"tolerance", c.tolerance},
                 {"translation_tolerance", c.translation_tolerance}};
  nlohmann::json checks = nlohmann::json::object();
  double worst = 0.0;
  for (const auto& k : r.checks) {
    checks[k.name] = {{"max_residual", k.max_residual},
                      {"mean_residual", k.mean_residual()},
                      {"comparisons", k.count}};
    worst = std::max(worst, k.max_residual);
  }
  j["checks"] = checks;
  j["max_residual"] = worst;
  j["passed"] = r.passed();
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : r.failures) {
    fails.push_back({{"identity", f.identity}, {"residual", f.residual},
                     {"reproducer", reproducer_json(c, f.draw)}});
  }
  j["failures"] = fails;
  j["timing"] = {{"total", r.seconds}};
  return j;
}

nlohmann::json dirichlet_json(const DirichletCheck& c) {
  return {{"partial_sum", complex_json(c.partial_sum)},
          {"sum_tail_estimate", complex_json(c.sum_tail)},
          {"euler_product", complex_json(c.product)},
          {"euler_error_estimate", c.product_error},
          {"gap", c.gap},
          {"within_estimates", c.within_estimates()}};
}

}  // namespace zmw
