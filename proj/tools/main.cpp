#include <iostream>

#include "stylematch/cli.h"

int main(int argc, char** argv) { return stylematch::cli::run(argc, argv, std::cin, std::cout, std::cerr); }
