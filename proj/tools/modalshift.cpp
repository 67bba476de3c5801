#include <iostream>

#include "modalshift/cli.hpp"

int main(int argc, char** argv) {
  return modalshift::run_cli(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
