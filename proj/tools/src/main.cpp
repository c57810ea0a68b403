#include <iostream>
#include <string>
#include <vector>

#include "aggmc_tools/report.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv, argv + argc);
  return aggmc::cli::run(args, std::cout, std::cerr);
}
