#include <iostream>
#include <string>
#include <vector>

#include "onehot_nb/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return onehot_nb::cli::run(args, std::cout, std::cerr);
}
