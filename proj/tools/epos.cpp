#include <iostream>
#include <string>
#include <vector>

#include "epos/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return epos::cli::run(args, std::cout, std::cerr);
}
