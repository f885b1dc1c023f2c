#include <iostream>
#include <string>
#include <vector>

#include "nhlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return nhlab::cli::run(args, std::cout, std::cerr);
}
