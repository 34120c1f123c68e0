#include "lensreeb/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return lensreeb::cli::run(argc, argv, std::cout, std::cerr); }
