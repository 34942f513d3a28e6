#include "bezmod/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return bezmod::run_cli(argc, argv, std::cout, std::cerr); }
