#include <iostream>
#include <string>
#include <vector>

#include "snvkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return snvkit::cli::run_cli(args, std::cout, std::cerr);
}
