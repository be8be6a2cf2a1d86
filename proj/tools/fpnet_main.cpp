#include <iostream>
#include <string>
#include <vector>

#include "fpnet/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return fpnet::cli_main(args, std::cout, std::cerr);
}
