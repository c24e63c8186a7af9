#include <iostream>

#include "onto/cli.hpp"

int main(int argc, char** argv) { return onto::run_cli(argc, argv, std::cout, std::cerr); }
