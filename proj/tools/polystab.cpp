#include "polystab/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return polystab::cli::run(argc, argv, std::cout, std::cerr); }
