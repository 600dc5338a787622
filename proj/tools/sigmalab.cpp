#include <iostream>

#include "sigmalab/cli.hpp"

int main(int argc, char** argv) { return sigmalab::cli::main_entry(argc, argv, std::cout, std::cerr); }
