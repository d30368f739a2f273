#include <iostream>

#include "expsum/cli.hpp"

int main(int argc, char** argv) { return expsum::run_cli(argc, argv, std::cout, std::cerr); }
