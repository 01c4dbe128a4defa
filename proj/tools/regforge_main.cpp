#include <iostream>
#include <string>
#include <vector>

#include "regforge/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return regforge::run_cli(args, std::cout, std::cerr);
}
