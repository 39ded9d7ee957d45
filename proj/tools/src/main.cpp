#include <iostream>

#include "nsv_cli/cli.hpp"

int main(int argc, char** argv) { return nsv::cli::run(argc, argv, std::cout, std::cerr); }
