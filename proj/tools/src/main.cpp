#include <iostream>

#include "mvs/cli.hpp"

int main(int argc, char** argv) {
  return mvs::cli::run(std::vector<std::string>(argv, argv + argc), std::cout,
                       std::cerr);
}
