#include <iostream>
#include <string>
#include <vector>

#include "sitcause/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sitcause::runCli(args, std::cout, std::cerr);
}
