#include <iostream>

#include "abspot/cli.hpp"

int main(int argc, char** argv) { return abspot::run_cli(argc, argv, std::cout, std::cerr); }
