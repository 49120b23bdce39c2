#include <iostream>

#include "nfb/cli/cli.hpp"

int main(int argc, char** argv) { return nfb::cli::run(argc, argv, std::cout, std::cerr); }
