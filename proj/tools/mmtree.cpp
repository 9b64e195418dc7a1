#include <iostream>
#include <string>
#include <vector>

#include "mmtree/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return mmtree::cli::run(args, std::cout, std::cerr);
}
