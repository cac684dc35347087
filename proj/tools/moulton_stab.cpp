#include <iostream>
#include <string>
#include <vector>

#include "moulton/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return moulton::run(args, std::cout, std::cerr);
}
