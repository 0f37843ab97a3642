#include <iostream>

#include "regenperm_cli/cli.hpp"

int main(int argc, char** argv) { return regenperm::cli::run(argc, argv, std::cout, std::cerr); }
