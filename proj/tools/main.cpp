#include <iostream>

#include "fluxbvp/cli.hpp"

int main(int argc, char** argv) {
    return fluxbvp::cli::run(argc, argv, std::cout, std::cerr);
}
