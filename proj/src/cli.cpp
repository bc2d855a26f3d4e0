#include "zmw/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "zmw/correlation.hpp"
#include "zmw/empirical.hpp"
#include "zmw/identities.hpp"
#include "zmw/json_util.hpp"
#include "zmw/parallel.hpp"
#include "zmw/recipe.hpp"
#include "zmw/version.hpp"

namespace zmw::cli {
namespace {

using json = nlohmann::json;

enum class Kind { Number, Integer, Complex, Shifts, IntList, String, Bool };

struct Field {
  std::string key;
  Kind kind;
  std::string help;
};

struct Command {
  std::string name;
  std::string help;
  std::vector<Field> fields;
};

const std::vector<Field> kCommon{
    {"threads", Kind::Integer, "worker threads (0: all cores; ZMW_THREADS overrides)"},
    {"output", Kind::String, "write the report here instead of stdout"},
    {"format", Kind::String, "json or csv (csv: correlation only)"},
};

const std::vector<Command>& commands() {
  static const std::vector<Command> c{
      {"identities",
       "random-draw checks of the local Euler-factor identities",
       {{"seed", Kind::Integer, "RNG seed"},
        {"draws", Kind::Integer, "number of draws"},
        {"first_draw", Kind::Integer, "index of the first draw"},
        {"primes", Kind::IntList, "primes to draw from, e.g. 2,3,5,7"},
        {"max_size", Kind::Integer, "largest |A|, |B|"},
        {"radius", Kind::Number, "shifts drawn in this disk"},
        {"separation", Kind::Number, "minimum distance between shifts of one set"},
        {"depth", Kind::Integer, "prime-power depth R"},
        {"G_depth", Kind::Integer, "depth for the G closed form (p^R <= 1e7)"},
        {"translation_P", Kind::Integer, "Euler product cutoff for the global translation check"},
        {"tolerance", Kind::Number, "largest accepted residual"},
        {"translation_tolerance", Kind::Number, "largest accepted local translation residual"}}},
      {"dirichlet-check",
       "sum tau_A(n) tau_B(n) n^{-1-s} against A(A_s,B) Z(A_s,B)",
       {{"A", Kind::Shifts, "shift set A"},
        {"B", Kind::Shifts, "shift set B (default: A)"},
        {"s", Kind::Complex, "Re s >= 1"},
        {"N", Kind::Integer, "terms of the Dirichlet series"},
        {"P", Kind::Integer, "Euler product cutoff"}}},
      {"correlation",
       "D_{A,B}(u,h) against the main term m_{A,B}(u,h)",
       {{"A", Kind::Shifts, "shift set A"},
        {"B", Kind::Shifts, "shift set B (default: A)"},
        {"shifts", Kind::String, "both sets at once: \"A;B\""},
        {"u", Kind::Integer, "largest u"},
        {"u_points", Kind::IntList, "evaluation points <= u (default: u)"},
        {"h", Kind::IntList, "shifts h, e.g. 1..8"},
        {"q_cutoff", Kind::Integer, "q-sum cutoff"},
        {"quadrature_points", Kind::Integer, "Gauss-Legendre nodes per panel"},
        {"max_rel_dev", Kind::Number, "exit 2 when some row deviates more"}}},
      {"moment",
       "mean square of the Dirichlet polynomial against the conjecture",
       {{"A", Kind::Shifts, "shift set A"},
        {"B", Kind::Shifts, "shift set B (default: A)"},
        {"T", Kind::Number, "height T"},
        {"X", Kind::Integer, "polynomial length"},
        {"P", Kind::Integer, "Euler product cutoff"},
        {"threshold", Kind::Number, "psi_hat cutoff"},
        {"conjecture", Kind::Bool, "evaluate the conjectured value"},
        {"max_rel_dev", Kind::Number, "exit 2 when the relative deviation exceeds this"}}},
      {"recipe",
       "recipe sum over swap sets",
       {{"A", Kind::Shifts, "shift set A"},
        {"B", Kind::Shifts, "shift set B (default: A)"},
        {"T", Kind::Number, "height T"},
        {"P", Kind::Integer, "Euler product cutoff"},
        {"max_swaps", Kind::Integer, "largest |U| (default: min(|A|, |B|))"}}},
      {"table-build",
       "tau_A(n), n <= N, to a binary table",
       {{"A", Kind::Shifts, "shift set"},
        {"N", Kind::Integer, "table length"},
        {"path", Kind::String, "output table file"}}},
  };
  return c;
}

std::string flag_name(const std::string& key) {
  std::string s = key;
  for (char& c : s) {
    if (c == '_') c = '-';
  }
  return "--" + s;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& s, std::string_view what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw ValidationError(std::string(what) + ": cannot read a number from \"" + s + "\"");
  }
  return v;
}

std::uint64_t integral(double v, std::string_view what) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.007199254740992e15) {
    throw ValidationError(std::string(what) + ": expected a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

// ---- typed access to the merged config, with field diagnostics

std::string where(std::string_view key) { return "field '" + std::string(key) + "'"; }

bool has(const json& c, const std::string& key) { return c.contains(key) && !c[key].is_null(); }

double get_number(const json& c, const std::string& key) {
  const auto& v = c.at(key);
  if (!v.is_number()) throw ValidationError(where(key) + ": expected a number");
  return v.get<double>();
}

double get_number(const json& c, const std::string& key, double fallback) {
  return has(c, key) ? get_number(c, key) : fallback;
}

std::uint64_t get_u64(const json& c, const std::string& key) {
  const auto& v = c.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number()) return integral(v.get<double>(), where(key));
  throw ValidationError(where(key) + ": expected a non-negative integer");
}

std::uint64_t get_u64(const json& c, const std::string& key, std::uint64_t fallback) {
  return has(c, key) ? get_u64(c, key) : fallback;
}

std::string get_string(const json& c, const std::string& key, const std::string& fallback) {
  if (!has(c, key)) return fallback;
  if (!c[key].is_string()) throw ValidationError(where(key) + ": expected a string");
  return c[key].get<std::string>();
}

bool get_bool(const json& c, const std::string& key, bool fallback) {
  if (!has(c, key)) return fallback;
  if (!c[key].is_boolean()) throw ValidationError(where(key) + ": expected true or false");
  return c[key].get<bool>();
}

Complex get_complex(const json& c, const std::string& key, Complex fallback) {
  if (!has(c, key)) return fallback;
  const auto list = shift_list_from_json(json::array({c[key]}), key);
  return list.front();
}

std::vector<std::uint64_t> get_int_list(const json& c, const std::string& key) {
  const auto& v = c.at(key);
  if (v.is_string()) return parse_range(v.get<std::string>());
  if (!v.is_array()) throw ValidationError(where(key) + ": expected a list of integers or a range string");
  std::vector<std::uint64_t> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ValidationError(where(key) + ": expected integers");
    out.push_back(integral(e.get<double>(), where(key)));
  }
  return out;
}

std::vector<Complex> require_shifts(const json& c, const std::string& key) {
  if (!has(c, key)) throw ValidationError(where(key) + ": required");
  return shift_list_from_json(c[key], key);
}

ShiftSet distinct_set(std::vector<Complex> v, const std::string& key) {
  try {
    return ShiftSet(std::move(v));
  } catch (const DomainError& e) {
    throw ValidationError(where(key) + ": " + e.what());
  }
}

ShiftSet any_set(std::vector<Complex> v, const std::string& key) {
  try {
    return ShiftSet::multiset(std::move(v));
  } catch (const DomainError& e) {
    throw ValidationError(where(key) + ": " + e.what());
  }
}

// A required, B defaults to A
std::pair<std::vector<Complex>, std::vector<Complex>> shift_pair(const json& c) {
  auto a = require_shifts(c, "A");
  auto b = has(c, "B") ? require_shifts(c, "B") : a;
  return {a, b};
}

void require(const json& c, const std::string& key) {
  if (!has(c, key)) throw ValidationError(where(key) + ": required");
}

// ---- config loading and flag overlay

json load_config(const std::string& path, const Command& cmd) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config " + path + ": cannot open");
  json c;
  try {
    c = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path + ": " + e.what());
  }
  if (!c.is_object()) throw ValidationError("config " + path + ": top level must be an object");
  if (!c.contains("schema_version")) throw ValidationError("config " + path + ": " + where("schema_version") + ": required");
  if (c["schema_version"] != kSchemaVersion) {
    throw ValidationError("config " + path + ": " + where("schema_version") + ": expected " +
                          std::to_string(kSchemaVersion));
  }
  for (const auto& [key, value] : c.items()) {
    if (key == "schema_version" || key == "drawn") continue;  // "drawn": reproducer echo
    bool known = false;
    for (const auto& f : cmd.fields) known = known || f.key == key;
    for (const auto& f : kCommon) known = known || f.key == key;
    if (!known) throw ValidationError("config " + path + ": unknown field '" + key + "' for " + cmd.name);
  }
  c.erase("schema_version");
  c.erase("drawn");
  return c;
}

json flag_value(const Field& f, const std::string& raw) {
  const std::string what = "option " + flag_name(f.key);
  switch (f.kind) {
    case Kind::Number:
      return parse_double(raw, what);
    case Kind::Integer:
      return integral(parse_double(raw, what), what);
    case Kind::Complex:
    case Kind::Shifts:
    case Kind::String:
      return raw;
    case Kind::IntList:
      return parse_range(raw);
    case Kind::Bool:
      if (raw == "true" || raw == "1") return true;
      if (raw == "false" || raw == "0") return false;
      throw ValidationError(what + ": expected true or false");
  }
  return raw;
}

unsigned threads_of(const json& c) {
  return resolve_threads(static_cast<unsigned>(get_u64(c, "threads", 0)));
}

struct Outcome {
  std::string text;
  int code = kExitOk;
};

Outcome as_json(const json& report, int code) { return {report.dump(2) + "\n", code}; }

// ---- subcommands

Outcome run_identities(const json& c) {
  IdentitySuiteConfig cfg;
  cfg.seed = get_u64(c, "seed", cfg.seed);
  cfg.draws = get_u64(c, "draws", cfg.draws);
  cfg.first_draw = get_u64(c, "first_draw", cfg.first_draw);
  if (has(c, "primes")) cfg.primes = get_int_list(c, "primes");
  cfg.max_size = get_u64(c, "max_size", cfg.max_size);
  cfg.radius = get_number(c, "radius", cfg.radius);
  cfg.separation = get_number(c, "separation", cfg.separation);
  cfg.depth = static_cast<int>(get_u64(c, "depth", static_cast<std::uint64_t>(cfg.depth)));
  cfg.G_depth = static_cast<int>(get_u64(c, "G_depth", static_cast<std::uint64_t>(cfg.G_depth)));
  cfg.translation_P = get_u64(c, "translation_P", cfg.translation_P);
  cfg.tolerance = get_number(c, "tolerance", cfg.tolerance);
  cfg.translation_tolerance = get_number(c, "translation_tolerance", cfg.translation_tolerance);
  if (cfg.G_depth < 1 || cfg.G_depth > 20) throw ValidationError(where("G_depth") + ": must lie in [1, 20]");
  if (cfg.translation_P < 2) throw ValidationError(where("translation_P") + ": must be at least 2");
  const auto r = run_identity_suite(cfg, threads_of(c));
  json report = suite_json(r);
  report["config"]["schema_version"] = kSchemaVersion;
  return as_json(report, r.passed() ? kExitOk : kExitBreach);
}

Outcome run_dirichlet(const json& c) {
  const auto [a, b] = shift_pair(c);
  const ShiftSet A = any_set(a, "A"), B = any_set(b, "B");
  const Complex s = get_complex(c, "s", 1.0);
  const auto N = get_u64(c, "N", 1000000);
  const auto P = get_u64(c, "P", 100000);
  if (s.real() < 1.0) throw ValidationError(where("s") + ": needs Re s >= 1");
  if (N < 16 || N > 100000000) throw ValidationError(where("N") + ": must lie in [16, 1e8]");
  if (P < 2 || P > 100000000) throw ValidationError(where("P") + ": must lie in [2, 1e8]");
  const auto r = check_dirichlet_series(A, B, s, N, P, threads_of(c));
  json report;
  report["version"] = kVersion;
  report["config"] = {{"schema_version", kSchemaVersion}, {"A", shifts_json(A)}, {"B", shifts_json(B)},
                      {"s", complex_json(s)}, {"N", N}, {"P", P}};
  report["result"] = dirichlet_json(r);
  return as_json(report, r.within_estimates() ? kExitOk : kExitBreach);
}

Outcome run_correlation_cmd(const json& c, const std::string& format) {
  CorrelationJob job;
  const auto [a, b] = shift_pair(c);
  job.A = distinct_set(a, "A");
  job.B = distinct_set(b, "B");
  require(c, "u");
  require(c, "h");
  job.u_max = get_u64(c, "u");
  if (job.u_max < 10 || job.u_max > 200000000) throw ValidationError(where("u") + ": must lie in [10, 2e8]");
  if (has(c, "u_points")) job.u_points = get_int_list(c, "u_points");
  for (const auto u : job.u_points) {
    if (u < 1 || u > job.u_max) throw ValidationError(where("u_points") + ": points must lie in [1, u]");
  }
  job.h_list = get_int_list(c, "h");
  job.q_cutoff = get_u64(c, "q_cutoff", job.q_cutoff);
  job.quadrature_points = static_cast<int>(get_u64(c, "quadrature_points", 16));
  if (job.quadrature_points < 2 || job.quadrature_points > 64) {
    throw ValidationError(where("quadrature_points") + ": must lie in [2, 64]");
  }
  job.validate();
  const auto rows = run_correlation(job, threads_of(c));

  int code = kExitOk;
  if (has(c, "max_rel_dev")) {
    const double limit = get_number(c, "max_rel_dev");
    for (const auto& r : rows) {
      if (!(r.rel_dev <= limit)) code = kExitBreach;
    }
  }
  json echo = {{"schema_version", kSchemaVersion}, {"A", shifts_json(job.A)}, {"B", shifts_json(job.B)},
               {"u", job.u_max}, {"u_points", job.u_points}, {"h", job.h_list},
               {"q_cutoff", job.q_cutoff}, {"quadrature_points", job.quadrature_points}};
  if (has(c, "max_rel_dev")) echo["max_rel_dev"] = get_number(c, "max_rel_dev");
  if (format == "csv") {
    return {"# " + std::string(kVersion) + "\n# config " + echo.dump() + "\n" + correlation_csv(rows), code};
  }
  json report;
  report["version"] = kVersion;
  report["config"] = echo;
  json out = json::array();
  for (const auto& r : rows) {
    out.push_back({{"u", r.u}, {"h", r.h}, {"D", complex_json(r.D)}, {"m", complex_json(r.m)},
                   {"rel_dev", r.rel_dev}, {"truncation_estimate", r.truncation_estimate}});
  }
  report["rows"] = out;
  return as_json(report, code);
}

Outcome run_moment(const json& c) {
  MomentJob job;
  const auto [a, b] = shift_pair(c);
  job.A = distinct_set(a, "A");
  job.B = distinct_set(b, "B");
  require(c, "T");
  require(c, "X");
  job.T = get_number(c, "T");
  job.X = get_u64(c, "X");
  if (job.X > 500000000) throw ValidationError(where("X") + ": at most 5e8");
  job.P = get_u64(c, "P", job.P);
  job.threshold = get_number(c, "threshold", job.threshold);
  job.conjecture = get_bool(c, "conjecture", true);
  if (!(job.threshold > 0.0 && job.threshold < 1e-3)) throw ValidationError(where("threshold") + ": must lie in (0, 1e-3)");
  ExperimentReport r;
  try {
    r = I_report(job, threads_of(c));
  } catch (const DomainError& e) {
    throw ValidationError(std::string("moment: ") + e.what());
  }
  json report = report_json(r);
  report["config"]["schema_version"] = kSchemaVersion;
  int code = kExitOk;
  if (has(c, "max_rel_dev")) {
    const double limit = get_number(c, "max_rel_dev");
    report["config"]["max_rel_dev"] = limit;
    if (job.conjecture && !(r.rel_dev <= limit)) code = kExitBreach;
  }
  return as_json(report, code);
}

Outcome run_recipe(const json& c) {
  const auto [a, b] = shift_pair(c);
  const ShiftSet A = distinct_set(a, "A"), B = distinct_set(b, "B");
  require(c, "T");
  const double T = get_number(c, "T");
  if (!(T > 0.0)) throw ValidationError(where("T") + ": must be positive");
  const auto P = get_u64(c, "P", 20000);
  if (P < 100) throw ValidationError(where("P") + ": must be at least 100");
  const auto swaps = get_u64(c, "max_swaps", std::min(A.size(), B.size()));
  const auto r = recipe_R(A, B, T, P, static_cast<int>(swaps), threads_of(c));
  json report;
  report["version"] = kVersion;
  report["config"] = {{"schema_version", kSchemaVersion}, {"A", shifts_json(A)}, {"B", shifts_json(B)},
                      {"T", T}, {"P", P}, {"max_swaps", swaps}};
  report["value"] = complex_json(r.value);
  report["error_estimate"] = r.error_estimate;
  json terms = json::array();
  for (const auto& t : r.terms) {
    terms.push_back({{"U", t.U}, {"V", t.V}, {"value", complex_json(t.value)},
                     {"error_estimate", t.error_estimate}});
  }
  report["terms"] = terms;
  return as_json(report, kExitOk);
}

Outcome run_table_build(const json& c) {
  const ShiftSet A = any_set(require_shifts(c, "A"), "A");
  require(c, "N");
  require(c, "path");
  const auto N = get_u64(c, "N");
  if (N < 1 || N > 500000000) throw ValidationError(where("N") + ": must lie in [1, 5e8]");
  const std::string path = get_string(c, "path", "");
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = tau_table(A, N);
  table.write_binary(path);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  json report;
  report["version"] = kVersion;
  report["config"] = {{"schema_version", kSchemaVersion}, {"A", shifts_json(A)}, {"N", N}, {"path", path}};
  report["bytes"] = 16 + 16 * A.size() + 16 * N;
  report["timing"] = {{"total", seconds}};
  return as_json(report, kExitOk);
}

}  // namespace

Complex parse_shift(std::string_view text) {
  std::string s;
  for (const char ch : text) {
    if (ch != ' ' && ch != '\t') s += ch;
  }
  if (s.empty()) throw ValidationError("empty shift");
  if (s.back() != 'i' && s.back() != 'j') return {parse_double(s, "shift"), 0.0};
  s.pop_back();
  // split before the last sign that does not belong to an exponent
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  const double imag = parse_double(im, "shift \"" + std::string(text) + "\"");
  const double real = re.empty() ? 0.0 : parse_double(re, "shift \"" + std::string(text) + "\"");
  return {real, imag};
}

std::vector<Complex> parse_shift_list(std::string_view text) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '[') {
    json j;
    try {
      j = json::parse(t);
    } catch (const json::parse_error& e) {
      throw ValidationError(std::string("shift list: ") + e.what());
    }
    return shift_list_from_json(j, "shifts");
  }
  std::vector<Complex> out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_shift(item));
  if (out.empty()) throw ValidationError("shift list is empty");
  return out;
}

std::vector<Complex> shift_list_from_json(const nlohmann::json& j, std::string_view field) {
  if (j.is_string()) return parse_shift_list(j.get<std::string>());
  if (!j.is_array()) throw ValidationError(where(field) + ": expected a list of shifts");
  std::vector<Complex> out;
  for (const auto& e : j) {
    if (e.is_number()) {
      out.emplace_back(e.get<double>(), 0.0);
    } else if (e.is_string()) {
      out.push_back(parse_shift(e.get<std::string>()));
    } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
      out.emplace_back(e[0].get<double>(), e[1].get<double>());
    } else {
      throw ValidationError(where(field) + ": each shift is a number, an \"a+bi\" string or [re, im]");
    }
  }
  if (out.empty()) throw ValidationError(where(field) + ": empty shift list");
  return out;
}

std::vector<std::uint64_t> parse_range(std::string_view text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss{std::string(text)};
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto dots = item.find("..");
    if (dots == std::string::npos) {
      out.push_back(integral(parse_double(item, "range"), "range"));
      continue;
    }
    const auto lo = integral(parse_double(item.substr(0, dots), "range"), "range");
    const auto hi = integral(parse_double(item.substr(dots + 2), "range"), "range");
    if (hi < lo || hi - lo > 1000000) throw ValidationError("range \"" + item + "\": bad bounds");
    for (auto v = lo; v <= hi; ++v) out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty range");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Shifted moments and divisor correlations: numeric experiments", "zmw"};
  app.set_help_flag("--help", "print this help and exit");  // -h would collide with --h
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);

  std::map<std::string, std::map<std::string, std::string>> raw;
  std::map<std::string, std::string> config_path;
  std::map<std::string, std::vector<std::pair<const Field*, CLI::Option*>>> options;
  for (const auto& cmd : commands()) {
    auto* sub = app.add_subcommand(cmd.name, cmd.help);
    sub->add_option("--config", config_path[cmd.name], "JSON config (flags override it)");
    auto add = [&](const Field& f) {
      options[cmd.name].emplace_back(&f, sub->add_option(flag_name(f.key), raw[cmd.name][f.key], f.help));
    };
    for (const auto& f : cmd.fields) add(f);
    for (const auto& f : kCommon) add(f);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  const Command* cmd = nullptr;
  for (const auto& c : commands()) {
    if (app.got_subcommand(c.name)) cmd = &c;
  }
  try {
    json cfg = config_path[cmd->name].empty() ? json::object() : load_config(config_path[cmd->name], *cmd);
    for (const auto& [field, opt] : options[cmd->name]) {
      if (opt->count() > 0) cfg[field->key] = flag_value(*field, raw[cmd->name][field->key]);
    }
    if (has(cfg, "shifts")) {
      const std::string s = get_string(cfg, "shifts", "");
      const auto semi = s.find(';');
      cfg["A"] = s.substr(0, semi);
      cfg["B"] = semi == std::string::npos ? s : s.substr(semi + 1);
      cfg.erase("shifts");
    }
    const std::string format = get_string(cfg, "format", cmd->name == "correlation" ? "csv" : "json");
    if (format != "json" && !(format == "csv" && cmd->name == "correlation")) {
      throw ValidationError(where("format") + ": \"" + format + "\" is not available for " + cmd->name);
    }

    Outcome result;
    if (cmd->name == "identities") result = run_identities(cfg);
    else if (cmd->name == "dirichlet-check") result = run_dirichlet(cfg);
    else if (cmd->name == "correlation") result = run_correlation_cmd(cfg, format);
    else if (cmd->name == "moment") result = run_moment(cfg);
    else if (cmd->name == "recipe") result = run_recipe(cfg);
    else result = run_table_build(cfg);

    const std::string path = get_string(cfg, "output", "");
    if (path.empty()) {
      out << result.text;
    } else {
      std::ofstream f(path);
      if (!f || !(f << result.text)) throw ResourceError("cannot write " + path);
    }
    if (result.code == kExitBreach) err << cmd->name << ": acceptance threshold exceeded\n";
    return result.code;
  } catch (const std::exception& e) {
    err << cmd->name << ": " << e.what() << "\n";
    return kExitInvalid;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace zmw::cli
