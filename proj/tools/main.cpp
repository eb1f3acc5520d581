#include <fstream>
#include <iostream>
#include <sstream>

#include "config.hpp"
#include "runner.hpp"

namespace {

void usage(std::ostream& out) {
  out << "usage: pmflow <command> [args]\n"
         "\n"
         "commands:\n"
         "  run <config-file>     execute the [run] sections of the configuration\n"
         "  sweep <config-file>   execute the solver x tolerance x dt sweep lists\n"
         "  list-scenarios        print the built-in scenario names\n"
         "\n"
         "exit code: 0 on success, 2 if any run did not converge, 1 on error.\n"
         "PMFLOW_OUTPUT_ROOT prefixes the configured output directory.\n";
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

} // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    usage(std::cerr);
    return 1;
  }
  const std::string command = argv[1];
  try {
    if (command == "list-scenarios") {
      return pmflow::cli::list_scenarios(std::cout);
    }
    if (command == "run" || command == "sweep") {
      if (argc != 3) {
        usage(std::cerr);
        return 1;
      }
      const pmflow::cli::RunConfig config =
          pmflow::cli::parse_config(read_file(argv[2]));
      return pmflow::cli::execute_config(config, command == "sweep", std::cout);
    }
    if (command == "help" || command == "--help" || command == "-h") {
      usage(std::cout);
      return 0;
    }
    std::cerr << "error: unknown command '" << command << "'\n";
    usage(std::cerr);
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
