#include <iostream>

#include "cpent/cli/run.hpp"

int main(int argc, char** argv) { return cpent::cli::run(argc, argv, std::cout, std::cerr); }
