#pragma once

// Command-line front end. Every subcommand reads an optional JSON config
// (--config) and overlays the flags given explicitly on the command line.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "zmw/numeric.hpp"

namespace zmw::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitBreach = 2;
inline constexpr int kSchemaVersion = 1;

/// "0.02", "-0.01+0.03i", "0.5i", "-i". Throws ValidationError.
Complex parse_shift(std::string_view text);

/// Comma-separated shifts, or a JSON array whose entries are numbers,
/// "a+bi" strings or [re, im] pairs.
std::vector<Complex> parse_shift_list(std::string_view text);
std::vector<Complex> shift_list_from_json(const nlohmann::json& j, std::string_view field);

/// "1..8", "1,2,6", "1..4,9".
std::vector<std::uint64_t> parse_range(std::string_view text);

/// Runs one subcommand. The report goes to `out` unless --output names a file.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace zmw::cli
