#include <iostream>

#include "zmw/cli.hpp"

int main(int argc, char** argv) { return zmw::cli::run(argc, argv, std::cout, std::cerr); }
