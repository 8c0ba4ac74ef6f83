#include <iostream>

#include "rpent/cli.hpp"

int main(int argc, char** argv) { return rpent::cli::run_cli(argc, argv, std::cout, std::cerr); }
