#include <iostream>
#include <string>
#include <vector>

#include "xdalign/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return xdalign::cli::run(args, std::cout, std::cerr);
}
