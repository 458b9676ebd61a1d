#include <iostream>

#include "dtheory/cli.hpp"

int main(int argc, char** argv) { return dtheory::cli::main_entry(argc, argv, std::cout, std::cerr); }
