#include <iostream>

#include "osqse/cli.hpp"

int main(int argc, char** argv) { return osqse::cli::run(argc, argv, std::cout, std::cerr); }
