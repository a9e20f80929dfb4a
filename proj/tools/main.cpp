#include <string>
#include <vector>

#include "macbounds/cli.hpp"

int main(int argc, char** argv) {
    return macbounds::cli_main(std::vector<std::string>(argv + 1, argv + argc));
}
