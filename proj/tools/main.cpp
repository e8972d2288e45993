#include <iostream>

#include "pdist/cli.hpp"

int main(int argc, char** argv) {
  return pdist::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
