#include <iostream>

#include "lac/cli.hpp"

int main(int argc, char** argv) { return lac::cli::main(argc, argv, std::cout, std::cerr); }
