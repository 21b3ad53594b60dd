#include <iostream>

#include "biflip/cli.hpp"

int main(int argc, char** argv) { return biflip::run_cli(argc, argv, std::cout, std::cerr); }
