#include <iostream>
#include <string>
#include <vector>

#include "ptmom/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return ptmom::cli::run(std::move(args), std::cout, std::cerr);
}
