#include <iostream>

#include "lbound/cli.hpp"

int main(int argc, char** argv) {
  return lbound::cli::run(argc, argv, std::cout, std::cerr);
}
