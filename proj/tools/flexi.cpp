#include <iostream>

#include "flexi/cli.hpp"

int main(int argc, char** argv) { return flexi::cli::run(argc, argv, std::cout, std::cerr); }
