#include "fuzzy_ettp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return fuzzy_ettp::cli::run_cli(args);
}
