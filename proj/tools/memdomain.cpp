#include <iostream>

#include "memdomain/cli.hpp"

int main(int argc, char** argv) { return memdomain::cli::run(argc, argv, std::cout, std::cerr); }
