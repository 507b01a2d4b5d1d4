#include <iostream>

#include "sllbar/cli.hpp"

int main(int argc, char** argv) { return sllbar::run_command(argc, argv, std::cout, std::cerr); }
