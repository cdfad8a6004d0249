#include <iostream>

#include "setgap/commands.hpp"

int main(int argc, char** argv) { return setgap::run_cli(argc, argv, std::cout, std::cerr); }
