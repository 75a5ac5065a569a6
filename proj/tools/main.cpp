#include <iostream>

#include "redpath/cli.hpp"

int main(int argc, char** argv) { return redpath::run_cli(argc, argv, std::cout, std::cerr); }
