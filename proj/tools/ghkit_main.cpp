#include <iostream>
#include <string>
#include <vector>

#include "ghkit/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ghkit::cli::run(args, std::cout, std::cerr);
}
