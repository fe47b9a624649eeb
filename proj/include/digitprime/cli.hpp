#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "digitprime/fitlab.hpp"

namespace digitprime::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitInvalidArguments = 2;
inline constexpr int kExitBudgetExceeded = 3;

// Runs one subcommand; args exclude the program name. Records go to `out`
// (or the --output file), diagnostics and usage to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Parses JSON-lines records; blank lines are skipped.
std::vector<Json> read_records(std::istream& in);

// Whitespace-separated table of the named columns over the data records,
// preceded by a "# col1 col2 ..." line. Throws std::invalid_argument when a
// data record lacks a column.
std::string emit_plotdata(const std::vector<Json>& records, const std::vector<std::string>& columns);

}  // namespace digitprime::cli
