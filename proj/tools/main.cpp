#include <iostream>
#include <string>
#include <vector>

#include "hoeffding/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return hoeffding::cli::run(args, std::cout, std::cerr);
}
