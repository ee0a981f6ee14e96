#include <iostream>

#include "pushsim/cli.hpp"

int main(int argc, char** argv) { return pushsim::cli::run(argc, argv, std::cout, std::cerr); }
