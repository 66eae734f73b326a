#include "jetvar/commands.hpp"
#include "jetvar/errors.hpp"
#include "jetvar/problem.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>

int main(int argc, char** argv) {
  using namespace jetvar;
  CLI::App app{"Self-adjointness, determining systems and conservation laws of evolution equations"};
  std::string command;
  std::string format = "plain";
  std::string out_path;
  std::string file;
  app.add_option("command", command, "Command to run")
      ->required()
      ->check(CLI::IsMember(command_names()));
  app.add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"plain", "records", "tex"}));
  app.add_option("--out", out_path, "Write the report to PATH instead of stdout");
  app.add_option("file", file, "Problem file")->required()->check(CLI::ExistingFile);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : exit_code::usage;
  }

  std::ifstream in(file);
  std::stringstream text;
  text << in.rdbuf();

  std::ofstream out_file;
  if (!out_path.empty()) {
    out_file.open(out_path);
    if (!out_file) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return exit_code::usage;
    }
  }
  std::ostream& out = out_path.empty() ? std::cout : out_file;

  CommandOptions options;
  options.format = format == "records" ? OutputFormat::records
                   : format == "tex"   ? OutputFormat::tex
                                       : OutputFormat::plain;
  options.color = out_path.empty() && options.format == OutputFormat::plain &&
                  std::getenv("NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
  try {
    ProblemFile problem = parse_problem(text.str());
    return run_command(command, problem, options, out, std::cerr);
  } catch (const NumericBlowUp& e) {
    std::cerr << file << ": error: " << e.what() << " (last valid time " << e.last_valid_time()
              << ")\n";
    return exit_status_for(e);
  } catch (const std::exception& e) {
    std::cerr << file << ": error: " << e.what() << "\n";
    return exit_status_for(e);
  }
}
