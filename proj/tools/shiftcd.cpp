#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return shiftcd::cli::run(argc, argv, std::cout, std::cerr, SHIFTCD_DEFAULT_MANIFEST);
}
