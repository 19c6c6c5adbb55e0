#include <iostream>

#include "actsense/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return actsense::run_cli(args, std::cout, std::cerr);
}
