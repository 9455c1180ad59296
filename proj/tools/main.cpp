#include <iostream>

#include "elbmf_cli.hpp"

int main(int argc, char** argv) { return elbmf::cli::run(argc, argv, std::cout, std::cerr); }
