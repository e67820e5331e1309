#include "twonn/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return twonn::cli::run_cli(argc, argv, std::cout, std::cerr);
}
