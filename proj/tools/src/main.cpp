#include <iostream>
#include <string>
#include <vector>

#include "spinmirror/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return spinmirror::cli::run(args, std::cout, std::cerr);
}
