#include <iostream>

#include "qbnf/cli.hpp"

int main(int argc, char** argv) { return qbnf::run_cli(argc, argv, std::cout, std::cerr); }
