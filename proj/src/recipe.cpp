#include "zmw/recipe.hpp"

#include <algorithm>
#include <functional>
#include <memory>

#include "zmw/euler.hpp"
#include "zmw/parallel.hpp"

namespace zmw {
namespace {

// int_1^2 psi(t) (tT/2pi)^{-E} dt
Complex power_moment(double T, Complex E) {
  return integrate_psi_complex([&](double t) { return std::exp(-E * std::log(t * T / (2.0 * kPi))); });
}

ShiftSet swapped(const ShiftSet& keep_from, const std::vector<std::size_t>& drop,
                 const ShiftSet& other, const std::vector<std::size_t>& take) {
  ShiftSet out = keep_from;
  std::vector<std::size_t> order(drop);
  std::sort(order.rbegin(), order.rend());
  for (const std::size_t i : order) out = out.without(i);
  for (const std::size_t j : take) out = out.with(-other[j]);
  return out;
}

std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    out.push_back(std::move(s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string index_list(const std::vector<std::size_t>& v) {
  std::string s = "{";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "}";
}

}  // namespace

RecipeResult recipe_R(const ShiftSet& A, const ShiftSet& B, double T, std::uint64_t P,
                      int max_swaps, unsigned threads) {
  if (T <= 0.0) throw DomainError("recipe: T must be positive");
  if (max_swaps < 0) throw DomainError("recipe: max_swaps must be non-negative");
  RecipeResult out;
  const std::size_t top = std::min({A.size(), B.size(), static_cast<std::size_t>(max_swaps)});
  for (std::size_t j = 0; j <= top; ++j) {
    for (const auto& U : subsets_of_size(A.size(), j)) {
      for (const auto& V : subsets_of_size(B.size(), j)) out.terms.push_back({U, V, 0.0, 0.0});
    }
  }
  parallel_chunks(out.terms.size(), threads, [&](std::size_t i) {
    SwapTerm& term = out.terms[i];
    const ShiftSet A2 = swapped(A, term.U, B, term.V);
    const ShiftSet B2 = swapped(B, term.V, A, term.U);
    Complex E = 0.0;
    for (const std::size_t u : term.U) E += A[u];
    for (const std::size_t v : term.V) E += B[v];
    Complex z;
    try {
      z = Z_product(A2, B2);
    } catch (const DomainError& e) {
      throw DomainError("recipe term U=" + index_list(term.U) + " V=" + index_list(term.V) + ": " +
                        e.what());
    }
    const EulerProduct a = global_A(A2, B2, P);
    const Complex scale = T * power_moment(T, E) * z;
    term.value = scale * a.value;
    term.error_estimate = std::abs(scale) * a.error_estimate;
  });
  CompensatedSum s;
  for (const auto& t : out.terms) {
    s += t.value;
    out.error_estimate += t.error_estimate;
  }
  out.value = s.value();
  return out;
}

Complex diagonal_term(const ShiftedTauTable& tableA, const ShiftedTauTable& tableB, double T,
                      double X, const SmoothWeight& weight) {
  if (X < 0.0) throw DomainError("diagonal: X must be non-negative");
  const auto n_max = static_cast<std::uint64_t>(std::floor(X));
  if (n_max > tableA.limit() || n_max > tableB.limit()) {
    throw BoundsError("diagonal: X = " + std::to_string(n_max) + " exceeds the tau tables");
  }
  CompensatedSum s;
  for (std::uint64_t n = 1; n <= n_max; ++n) s += tableA[n] * tableB[n] / static_cast<double>(n);
  return T * weight.hat_at_zero() * s.value();
}

std::vector<Complex> one_swap_poles(const ShiftSet& A, const ShiftSet& B, std::size_t ia,
                                    std::size_t ib) {
  std::vector<Complex> poles{0.0, -A[ia] - B[ib]};
  for (std::size_t i = 0; i < A.size(); ++i) {
    if (i == ia) continue;
    for (std::size_t j = 0; j < B.size(); ++j) {
      if (j != ib) poles.push_back(-A[i] - B[j]);
    }
  }
  return poles;
}

OneSwapResult one_swap_term(const ShiftSet& A, const ShiftSet& B, std::size_t ia, std::size_t ib,
                            double T, double X, const OneSwapOptions& opts) {
  if (ia >= A.size() || ib >= B.size()) throw DomainError("one-swap: hat index out of range");
  if (!(T > 0.0) || X < T || X > 0.99 * T * T) {
    throw DomainError("one-swap: needs T <= X <= 0.99 T^2");
  }
  constexpr double kLeft = -0.25;
  std::vector<Complex> poles;
  for (const Complex p : one_swap_poles(A, B, ia, ib)) {
    if (p.real() > kLeft) poles.push_back(p);
  }
  double gap = 1.0;
  for (std::size_t i = 0; i < poles.size(); ++i) {
    for (std::size_t j = i + 1; j < poles.size(); ++j) gap = std::min(gap, std::abs(poles[i] - poles[j]));
  }
  if (gap < 1e-4) {
    throw DomainError("one-swap: poles closer than 1e-4 (" + std::to_string(gap) +
                      "); perturb the shifts");
  }
  OneSwapResult out;
  out.ia = ia;
  out.ib = ib;
  out.poles = static_cast<int>(poles.size());
  out.contour_radius = std::min(1e-3, 0.5 * gap);

  const Complex ah = A[ia], bh = B[ib];
  const ShiftSet Ap = A.without(ia), Bp = B.without(ib);
  Complex z_pre = 1.0;
  for (const Complex a : Ap) z_pre *= zeta(1.0 + a - ah);
  for (const Complex b : Bp) z_pre *= zeta(1.0 + b - bh);

  // s-dependent part of the integrand, without x^s.
  std::function<Complex(Complex)> F;
  std::unique_ptr<HatProduct> hat;
  double euler_rel = 0.0;
  if (opts.recipe_route) {
    F = [&](Complex s) {
      const ShiftSet left = Ap.with(-bh - s);
      const ShiftSet right = Bp.translated(s).with(-ah);
      return global_A(left, right, opts.P).value * Z_product(left, right) / (s * z_pre);
    };
    const ShiftSet left = Ap.with(-bh), right = Bp.with(-ah);
    const auto g = global_A(left, right, opts.P);
    euler_rel = g.error_estimate / std::abs(g.value);
  } else {
    hat = std::make_unique<HatProduct>(A, B, ia, ib, opts.P, kLeft - 0.01);
    F = [&](Complex s) {
      Complex v = hat->evaluate(s).value * zeta(1.0 - ah - bh - s) / s;
      for (const Complex a : Ap) {
        for (const Complex b : Bp) v *= zeta(1.0 + s + a + b);
      }
      return v;
    };
    const auto g = hat->evaluate(0.0);
    euler_rel = g.error_estimate / std::abs(g.value);
  }

  std::vector<ContourSpec> contours;
  std::vector<std::vector<Complex>> nodes, f_values;
  for (const Complex p : poles) {
    const ContourSpec c{p, out.contour_radius, opts.contour_nodes};
    contours.push_back(c);
    nodes.push_back(contour_nodes(c));
    std::vector<Complex> fv;
    for (const Complex s : nodes.back()) fv.push_back(F(s));
    f_values.push_back(std::move(fv));
  }

  const auto& rule = psi_rule();
  CompensatedSum total;
  std::vector<Complex> samples(static_cast<std::size_t>(opts.contour_nodes));
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    const double t = rule.t[i];
    const double log_x = std::log(2.0 * kPi * X / (t * T));
    Complex res{0.0, 0.0};
    for (std::size_t k = 0; k < contours.size(); ++k) {
      for (std::size_t n = 0; n < samples.size(); ++n) {
        samples[n] = std::exp(nodes[k][n] * log_x) * f_values[k][n];
      }
      res += residue_from_samples(contours[k], samples);
    }
    total += rule.w[i] * std::exp(-(ah + bh) * std::log(t * T / (2.0 * kPi))) * res;
  }
  out.value = T * z_pre * total.value();
  out.euler_error = euler_rel * std::abs(out.value);

  // Size of the abandoned integral on Re s = -1/4, gauged by the integrand at
  // its real point and the smallest x = 2 pi X / (2T).
  const double x_min = kPi * X / T;
  const double c = std::abs(std::exp(-(ah + bh) * std::log(T / kPi)));
  out.remainder_estimate = T * std::abs(z_pre) * c * std::abs(F(kLeft)) * std::pow(x_min, kLeft) *
                           integrate_psi([](double) { return 1.0; });
  return out;
}

ConjectureResult conjectured_I(const ShiftedTauTable& tableA, const ShiftedTauTable& tableB,
                               double T, double X, const SmoothWeight& weight,
                               const OneSwapOptions& opts, unsigned threads) {
  if (X > 0.99 * T * T) throw DomainError("conjecture: X beyond the one-swap range 0.99 T^2");
  ConjectureResult out;
  out.diagonal = diagonal_term(tableA, tableB, T, X, weight);
  CompensatedSum s;
  s += out.diagonal;
  if (X >= T) {
    const ShiftSet& A = tableA.shifts();
    const ShiftSet& B = tableB.shifts();
    out.one_swap.resize(A.size() * B.size());
    parallel_chunks(out.one_swap.size(), threads, [&](std::size_t i) {
      out.one_swap[i] = one_swap_term(A, B, i / B.size(), i % B.size(), T, X, opts);
    });
    for (const auto& term : out.one_swap) {
      s += term.value;
      out.error_estimate += term.remainder_estimate + term.euler_error;
    }
  }
  out.value = s.value();
  return out;
}

}  // namespace zmw
