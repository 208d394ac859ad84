#include <iostream>

#include "borndev/cli_run.hpp"

int main(int argc, char** argv) {
    return borndev::cli::run_cli(argc, argv, std::cout, std::cerr);
}
