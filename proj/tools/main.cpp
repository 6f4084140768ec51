#include <iostream>

#include "calmks/cli.hpp"

int main(int argc, char** argv) { return calmks::run_cli(argc, argv, std::cout, std::cerr); }
