#include <iostream>

#include "expamoeba/cli.hpp"

int main(int argc, char** argv) { return expamoeba::run(argc, argv, std::cout, std::cerr); }
