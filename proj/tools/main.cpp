#include <iostream>

#include "tfcd/cli.hpp"

int main(int argc, char** argv) { return tfcd::cli::run(argc, argv, std::cout, std::cerr); }
