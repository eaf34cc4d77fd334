#include <iostream>
#include <string>
#include <vector>

#include "folknet/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return folknet::cli::run(args, std::cout, std::cerr);
}
