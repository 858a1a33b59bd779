#include <iostream>
#include <string>
#include <vector>

#include "levysid/app.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return levysid::run_cli(args, std::cout, std::cerr);
}
