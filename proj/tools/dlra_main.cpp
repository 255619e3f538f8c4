#include <iostream>

#include "dlra/cli.hpp"

int main(int argc, char** argv) { return dlra::cli::main(argc, argv, std::cout, std::cerr); }
