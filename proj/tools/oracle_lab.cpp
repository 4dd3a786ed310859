#include <iostream>

#include "oracle_lab/cli.hpp"

int main(int argc, char** argv) { return oracle_lab::cli::run(argc, argv, std::cout, std::cerr); }
