#include "hopflab/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv) { return hopflab::cli::run(argc, argv, std::cout, std::cerr); }
