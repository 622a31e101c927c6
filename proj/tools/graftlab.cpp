#include <iostream>

#include "runner/cli.hpp"

int main(int argc, char** argv) { return graftlab::runner::main_cli(argc, argv, std::cout, std::cerr); }
