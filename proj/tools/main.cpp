#include <iostream>

#include "qsysid/cli.hpp"

int main(int argc, char** argv) {
    return qsysid::cli::run(argc, argv, std::cout, std::cerr);
}
