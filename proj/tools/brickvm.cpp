#include <iostream>

#include "brickvm/gateway/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return brickvm::gateway::cli_main(args, std::cout, std::cerr);
}
