#include "zmw/shifts.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>
#include <new>
#include <sstream>

namespace zmw {
namespace {

void check_common(const std::vector<Complex>& shifts, const ShiftRules& rules) {
  if (shifts.size() > rules.max_size) {
    throw ValidationError("shift set has " + std::to_string(shifts.size()) +
                          " entries; the cap is " + std::to_string(rules.max_size));
  }
  for (const Complex a : shifts) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw ValidationError("shift set contains a non-finite entry");
    }
    if (std::abs(a) > rules.radius) {
      throw ValidationError("shift " + format_complex(a) + " exceeds radius " +
                            std::to_string(rules.radius));
    }
  }
}

bool lex_less(Complex a, Complex b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

}  // namespace

ShiftSet::ShiftSet(std::vector<Complex> shifts, const ShiftRules& rules)
    : shifts_(std::move(shifts)) {
  check_common(shifts_, rules);
  if (!distinct(rules.min_separation)) {
    throw ValidationError("shift set entries must be pairwise separated by at least " +
                          std::to_string(rules.min_separation));
  }
}

ShiftSet::ShiftSet(Unchecked, std::vector<Complex> shifts) : shifts_(std::move(shifts)) {}

ShiftSet ShiftSet::multiset(std::vector<Complex> shifts, const ShiftRules& rules) {
  check_common(shifts, rules);
  return ShiftSet(Unchecked{}, std::move(shifts));
}

ShiftSet ShiftSet::real(std::initializer_list<double> shifts) {
  std::vector<Complex> v(shifts.begin(), shifts.end());
  return multiset(std::move(v));
}

bool ShiftSet::distinct(double sep) const {
  for (std::size_t i = 0; i < shifts_.size(); ++i) {
    for (std::size_t j = i + 1; j < shifts_.size(); ++j) {
      if (std::abs(shifts_[i] - shifts_[j]) < sep) return false;
    }
  }
  return true;
}

void ShiftSet::require_distinct(std::string_view context, double sep) const {
  if (!distinct(sep)) {
    throw DomainError(std::string(context) +
                      ": repeated shifts give higher-order poles; perturb the shifts so they "
                      "are pairwise distinct");
  }
}

bool ShiftSet::all_real() const {
  return std::all_of(shifts_.begin(), shifts_.end(), [](Complex a) { return a.imag() == 0.0; });
}

double ShiftSet::max_abs_real() const {
  double m = 0.0;
  for (const Complex a : shifts_) m = std::max(m, std::abs(a.real()));
  return m;
}

ShiftSet ShiftSet::without(std::size_t index) const {
  std::vector<Complex> v;
  v.reserve(shifts_.size());
  for (std::size_t i = 0; i < shifts_.size(); ++i) {
    if (i != index) v.push_back(shifts_[i]);
  }
  return ShiftSet(Unchecked{}, std::move(v));
}

ShiftSet ShiftSet::with(Complex shift) const {
  std::vector<Complex> v = shifts_;
  v.push_back(shift);
  return ShiftSet(Unchecked{}, std::move(v));
}

ShiftSet ShiftSet::translated(Complex w) const {
  std::vector<Complex> v = shifts_;
  for (auto& a : v) a += w;
  return ShiftSet(Unchecked{}, std::move(v));
}

ShiftSet ShiftSet::conjugated() const {
  std::vector<Complex> v = shifts_;
  for (auto& a : v) a = std::conj(a);
  return ShiftSet(Unchecked{}, std::move(v));
}

bool operator==(const ShiftSet& a, const ShiftSet& b) {
  if (a.size() != b.size()) return false;
  auto x = a.shifts_;
  auto y = b.shifts_;
  std::sort(x.begin(), x.end(), lex_less);
  std::sort(y.begin(), y.end(), lex_less);
  return x == y;
}

std::vector<Complex> complete_homogeneous(std::span<const Complex> vars, int depth) {
  if (depth < 0) throw DomainError("prime-power depth must be non-negative");
  std::vector<Complex> h(static_cast<std::size_t>(depth) + 1, Complex{0.0, 0.0});
  h[0] = 1.0;
  for (const Complex x : vars) {
    for (std::size_t j = 1; j < h.size(); ++j) h[j] += x * h[j - 1];
  }
  return h;
}

std::vector<Complex> tau_prime_powers(const ShiftSet& shifts, std::uint64_t p, int depth) {
  if (depth < 0) throw DomainError("prime-power depth must be non-negative");
  std::vector<Complex> vars;
  vars.reserve(shifts.size());
  for (const Complex a : shifts) vars.push_back(pow_neg(static_cast<double>(p), a));
  return complete_homogeneous(vars, depth);
}

std::vector<std::uint32_t> smallest_prime_factors(std::uint64_t limit) {
  if (limit > 0xFFFFFFFFull) throw ResourceError("sieve limit exceeds 32-bit range");
  std::vector<std::uint32_t> spf;
  std::vector<std::uint32_t> primes;
  try {
    spf.assign(limit + 1, 0);
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate sieve of " + std::to_string(limit + 1) + " entries (" +
                        std::to_string((limit + 1) * 4) + " bytes)");
  }
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (spf[i] == 0) {
      spf[i] = static_cast<std::uint32_t>(i);
      primes.push_back(static_cast<std::uint32_t>(i));
    }
    for (const std::uint32_t p : primes) {
      const std::uint64_t m = i * p;
      if (p > spf[i] || m > limit) break;
      spf[m] = p;
    }
  }
  return spf;
}

ShiftedTauTable::ShiftedTauTable(ShiftSet shifts, std::uint64_t limit)
    : shifts_(std::move(shifts)), limit_(limit) {
  if (limit == 0) throw DomainError("tau table limit must be at least 1");
  try {
    values_.assign(limit + 1, Complex{0.0, 0.0});
  } catch (const std::bad_alloc&) {
    throw ResourceError("cannot allocate tau table of " + std::to_string(limit + 1) +
                        " entries (" + std::to_string((limit + 1) * 16) + " bytes)");
  }
  const auto spf = smallest_prime_factors(limit);
  values_[1] = 1.0;
  for (std::uint64_t n = 2; n <= limit; ++n) {
    const std::uint64_t p = spf[n];
    std::uint64_t rest = n;
    std::uint64_t power = 1;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      power *= p;
      ++e;
    }
    if (rest != 1) {
      values_[n] = values_[rest] * values_[power];
    } else if (e == 1) {
      Complex s{0.0, 0.0};
      for (const Complex a : shifts_) s += pow_neg(static_cast<double>(p), a);
      values_[n] = s;
    } else {
      values_[n] = tau_prime_powers(shifts_, p, e)[static_cast<std::size_t>(e)];
    }
  }
}

ShiftedTauTable::ShiftedTauTable(ShiftSet shifts, std::vector<Complex> values)
    : shifts_(std::move(shifts)), limit_(values.size() - 1), values_(std::move(values)) {}

Complex ShiftedTauTable::at(std::uint64_t n) const {
  if (n == 0 || n > limit_) {
    throw BoundsError("tau table index " + std::to_string(n) + " outside [1, " +
                      std::to_string(limit_) + "]");
  }
  return values_[n];
}

namespace {

constexpr char kMagic[4] = {'Z', 'M', 'W', '1'};

template <class T>
void put_le(std::ostream& out, T v) {
  static_assert(std::endian::native == std::endian::little, "big-endian hosts unsupported");
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get_le(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw ValidationError("truncated tau table file");
  return v;
}

}  // namespace

void ShiftedTauTable::write_binary(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ResourceError("cannot open " + path.string() + " for writing");
  out.write(kMagic, 4);
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(shifts_.size()));
  put_le<std::uint64_t>(out, limit_);
  for (const Complex a : shifts_) {
    put_le<double>(out, a.real());
    put_le<double>(out, a.imag());
  }
  for (std::uint64_t n = 1; n <= limit_; ++n) {
    put_le<double>(out, values_[n].real());
    put_le<double>(out, values_[n].imag());
  }
  if (!out) throw ResourceError("write failed for " + path.string());
}

ShiftedTauTable ShiftedTauTable::read_binary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ResourceError("cannot open " + path.string());
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0) {
    throw ValidationError(path.string() + " is not a ZMW1 tau table");
  }
  const auto k = get_le<std::uint32_t>(in);
  const auto n = get_le<std::uint64_t>(in);
  std::vector<Complex> shifts;
  for (std::uint32_t i = 0; i < k; ++i) {
    const double re = get_le<double>(in);
    const double im = get_le<double>(in);
    shifts.emplace_back(re, im);
  }
  std::vector<Complex> values(n + 1, Complex{0.0, 0.0});
  for (std::uint64_t i = 1; i <= n; ++i) {
    const double re = get_le<double>(in);
    const double im = get_le<double>(in);
    values[i] = {re, im};
  }
  ShiftRules loose;
  loose.radius = 1e300;
  loose.max_size = 1 << 20;
  return ShiftedTauTable(ShiftSet::multiset(std::move(shifts), loose), std::move(values));
}

Complex tau_at(const ShiftSet& shifts, std::uint64_t n) {
  if (n == 0) throw DomainError("tau_at: n must be at least 1");
  Complex result = 1.0;
  auto take = [&](std::uint64_t p, int e) {
    result *= tau_prime_powers(shifts, p, e)[static_cast<std::size_t>(e)];
  };
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) take(p, e);
  }
  if (n > 1) take(n, 1);
  return result;
}

}  // namespace zmw
