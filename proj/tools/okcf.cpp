#include <vector>

#include "okcf/runner.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return okcf::run_cli(args);
}
