#include <iostream>

#include "flowsched/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return flowsched::run_cli(args, std::cout, std::cerr);
}
