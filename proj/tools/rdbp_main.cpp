#include <iostream>
#include <string>
#include <vector>

#include "rdbp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return rdbp::cli::dispatch(args, std::cout, std::cerr);
}
