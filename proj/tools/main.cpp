#include <iostream>
#include <string>
#include <vector>

#include "rfdg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return rfdg::cli::run(args, std::cout, std::cerr);
}
