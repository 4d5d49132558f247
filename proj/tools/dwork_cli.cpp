#include <iostream>

#include "dwork/cli/commands.hpp"

int main(int argc, char** argv) { return dwork::cli::run(argc, argv, std::cout, std::cerr); }
