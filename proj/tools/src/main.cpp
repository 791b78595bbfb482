#include <iostream>

#include "l1pt/cli.hpp"

int main(int argc, char** argv) { return l1pt::cli::run(argc, argv, std::cout, std::cerr); }
