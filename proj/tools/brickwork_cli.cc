#include <iostream>

#include "brickwork/cli.h"

int main(int argc, char **argv) { return brickwork::cli::run(argc, argv, std::cout, std::cerr); }
