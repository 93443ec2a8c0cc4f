#include <iostream>

#include "fyk/cli.hpp"

int main(int argc, char** argv) { return fyk::cli::run(argc, argv, std::cout, std::cerr); }
