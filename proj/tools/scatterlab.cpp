#include <iostream>

#include "scatterlab/cli/runner.hpp"

int main(int argc, char** argv) { return scatterlab::cli::main(argc, argv, std::cout, std::cerr); }
