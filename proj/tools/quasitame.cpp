#include "quasitame/cli.hpp"

#include <iostream>

int main(int argc, char **argv) { return quasitame::run_cli(argc, argv, std::cout, std::cerr); }
