#include <iostream>

#include "ubcost/cli.hpp"

int main(int argc, char** argv) { return ubcost::cli::main(argc, argv, std::cout, std::cerr); }
