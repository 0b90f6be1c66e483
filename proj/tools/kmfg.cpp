#include <iostream>
#include <string>
#include <vector>

#include "kmfg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return kmfg::run(args, std::cout, std::cerr);
}
