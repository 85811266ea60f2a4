#include <iostream>
#include <string>
#include <vector>

#include "ifmsim/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ifmsim::run_cli(args, std::cout, std::cerr);
}
