#include "twofluid/io.hpp"

#include <iostream>

int main(int argc, char** argv) { return twofluid::run_cli(argc, argv, std::cout, std::cerr); }
