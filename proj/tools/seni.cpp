#include "seni/cli.hpp"

#include <iostream>

int main( int argc, char** argv )
{
    return seni::run_cli( argc, argv, std::cout, std::cerr );
}
