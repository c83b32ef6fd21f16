#include <iostream>

#include "flowfis/cli/cli.hpp"

int main(int argc, char** argv) {
    return flowfis::cli::run_cli(argc, argv, std::cout, std::cerr);
}
