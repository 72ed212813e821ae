#include <string>
#include <vector>

#include "forcefield/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return forcefield::run_cli(args);
}
