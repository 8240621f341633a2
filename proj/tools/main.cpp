#include <iostream>

#include "gpcpd/cli.hpp"

int main(int argc, char** argv) { return gpcpd::cli_main(argc, argv, std::cout, std::cerr); }
