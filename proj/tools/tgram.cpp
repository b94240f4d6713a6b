#include <iostream>
#include <string>
#include <vector>

#include "tgram/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return tgram::run_cli(args, std::cout, std::cerr);
}
