#include <iostream>

#include "repairopt/cli.hpp"

int main(int argc, char** argv) { return repairopt::cli::run(argc, argv, std::cout, std::cerr); }
