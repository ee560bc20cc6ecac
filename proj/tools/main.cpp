#include <iostream>

#include "rdo_cli/commands.hpp"

int main(int argc, char** argv) { return rdo::cli::run(argc, argv, std::cout, std::cerr); }
