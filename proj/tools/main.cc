#include <iostream>

#include "agreement/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return agreement::RunCli(args, std::cout, std::cerr);
}
