#include <iostream>

#include "localdep/cli.hpp"

int main(int argc, char** argv) { return localdep::cli::run(argc, argv, std::cout, std::cerr); }
