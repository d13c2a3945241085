#include <iostream>

#include "mobilab/cli.hpp"

int main(int argc, char** argv) {
    return mobilab::run_cli(argc, argv, std::cout, std::cerr);
}
