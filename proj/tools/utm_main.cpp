#include "utm/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return utm::cli::run(argc, argv, std::cout, std::cerr); }
