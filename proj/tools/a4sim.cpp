#include <iostream>

#include "a4/cli.hpp"

int main(int argc, char** argv) { return a4::cli_main(argc, argv, std::cout, std::cerr); }
