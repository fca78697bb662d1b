#include <iostream>
#include <string>
#include <vector>

#include "mckv/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mckv::cli::parse_and_dispatch(std::move(args), std::cout);
}
