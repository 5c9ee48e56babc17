#include <iostream>
#include <string>
#include <vector>

#include "supcast_tools/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return supcast::tools::run_cli(args, std::cout, std::cerr);
}
