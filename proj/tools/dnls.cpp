#include <iostream>

#include "dnls/cli.hpp"

int main(int argc, char** argv) { return dnls::cli::run(argc, argv, std::cout, std::cerr); }
