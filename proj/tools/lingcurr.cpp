#include <iostream>

#include "lingcurr/cli.hpp"

int main(int argc, char** argv) { return lingcurr::run_cli(argc, argv, std::cout, std::cerr); }
