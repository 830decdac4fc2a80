#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return bbf::cli::run(argc, argv, std::cout, std::cerr);
}
