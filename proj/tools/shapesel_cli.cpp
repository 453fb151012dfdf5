#include "shapesel/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return shapesel::run_cli(argc, argv, std::cout, std::cerr); }
