#include <iostream>

#include "intervalkit/cli/cli.hpp"

int main(int argc, char** argv) {
  return ik::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
