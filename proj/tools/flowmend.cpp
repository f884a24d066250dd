#include <iostream>

#include "flowmend/cli.hpp"

int main(int argc, char** argv) { return flowmend::run_cli(argc, argv, std::cout, std::cerr); }
