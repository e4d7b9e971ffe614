#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
  return htn::cli_main(argc, argv, std::cout, std::cerr);
}
