#include <iostream>

#include "renormlab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return renormlab::cli::run(args, std::cout, std::cerr);
}
