#include <iostream>

#include "bitprobe/cli.hpp"

int main(int argc, char** argv) { return bitprobe::cli::run(argc, argv, std::cout, std::cerr); }
