#include "publist/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return publist::cli::run_cli(argc, argv, std::cout, std::cerr); }
