#include <string>
#include <vector>

#include "lqgwalk/cli.hpp"

int main(int argc, char** argv) {
    return lqgwalk::run_cli(std::vector<std::string>(argv, argv + argc));
}
