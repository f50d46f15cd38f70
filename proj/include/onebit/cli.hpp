// SPDX-License-Identifier: Apache-2.0
//
// onebit: capacity of one-bit transceiver arrays in Rayleigh fading
// ------------------------------------------------------------------------
//
// Command-line front end. Argument parsing and execution are split so tests and
// the Python module can drive run() with a RunConfig directly.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace onebit::cli {

enum class Command { Capacity, Saddle, Sweep, Contour, Exact, Approx, Threshold, FitE, Figure };
enum class Format { Csv, Json };

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

/// Parameters are kept as text until run() validates them against the command.
struct RunConfig {
  Command command = Command::Capacity;
  std::map<std::string, std::string> params;  ///< key without leading dashes -> value
  Format format = Format::Csv;
  std::string output;  ///< empty = the stream passed to run()
};

/// Bad parameters for the selected command.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Keys accepted by a command, in documentation order.
std::vector<std::string> allowed_keys(Command c);

// ---- tables ----------------------------------------------------------------

using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> notes;  ///< CSV "# " header lines; JSON "notes"
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::optional<std::string> failure;  ///< JSON description of the first failed cell, if any
};

/// %.17g, the format used for every floating-point field.
std::string format_number(double v);

void write_csv(const Table& t, std::ostream& os);
void write_json(const Table& t, std::ostream& os);

/// Units attached to a column name in JSON output (empty when unitless).
std::string_view column_unit(std::string_view column);

// ---- execution -------------------------------------------------------------

/// Validates, computes and writes the table. Returns an exit code; errors are a
/// single JSON line on `err`.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Builds the table without writing it. Throws UsageError for bad parameters and
/// any library exception for numerical failures.
Table compute(const RunConfig& config);

/// Full entry point: parse argv, then run.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace onebit::cli
