#include <iostream>
#include <string>
#include <vector>

#include "coherence/cli.hpp"

int main(int argc, char** argv) {
  return coherence::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
