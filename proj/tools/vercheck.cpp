#include "vercheck/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return vercheck::cli::run(argc, argv, std::cout, std::cerr);
}
