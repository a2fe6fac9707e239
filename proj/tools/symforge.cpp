#include <iostream>

#include "symforge/cli.hpp"

int main(int argc, char** argv) { return symforge::cli::run(argc, argv, std::cout, std::cerr); }
