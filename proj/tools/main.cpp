#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) { return lcdlab::run_cli(argc, argv, std::cout, std::cerr); }
