#include <iostream>
#include <string>
#include <vector>

#include "twinkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return twinkit::cli::run(args, std::cout, std::cerr);
}
