#pragma once

#include "jetvar/problem.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace jetvar {

enum class OutputFormat { plain, records, tex };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int parse_error = 2;
inline constexpr int unsupported = 3;
inline constexpr int verification = 4;
inline constexpr int blow_up = 5;
}  // namespace exit_code

struct CommandOptions {
  OutputFormat format = OutputFormat::plain;
  bool color = false;
};

const std::vector<std::string>& command_names();

// Runs one command; reports go to `out`, warnings to `err`. Returns the exit status.
// Errors from the kernel propagate as exceptions (see exit_status_for).
int run_command(const std::string& command, const ProblemFile& problem,
                const CommandOptions& options, std::ostream& out, std::ostream& err);

// Exit status for an exception escaping run_command or parse_problem.
int exit_status_for(const std::exception& e);

}  // namespace jetvar
