#include <cstdlib>
#include <iostream>

#include "quadlin/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    std::optional<std::string> env_seed;
    if (const char* s = std::getenv("QUADLIN_SEED")) env_seed = s;
    return quadlin::cli_main(args, std::cout, std::cerr, env_seed);
}
