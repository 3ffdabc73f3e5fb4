#include <iostream>
#include <string>
#include <vector>

#include "unshuffle/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return unshuffle::run_cli(args, std::cout, std::cerr);
}
