#include <iostream>

#include "cap4/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cap4::run_cli(args, std::cout, std::cerr);
}
