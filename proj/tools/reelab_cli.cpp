#include <iostream>

#include "reelab/commands.hpp"

int main(int argc, char** argv) { return reelab::run_cli(argc, argv, std::cout, std::cerr); }
