#include <iostream>

#include "tsvft/cli.hpp"

int main(int argc, char** argv) {
  return tsvft::run_cli(argc - 1, argv + 1, std::cout, std::cerr);
}
