#include <vector>

#include "rdcache/cli.hpp"

int main(int argc, char** argv) {
    return rdcache::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
