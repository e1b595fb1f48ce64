#include <iostream>
#include <string>
#include <vector>

#include "imspe/app.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    const imspe::CommandResult r = imspe::run_cli(args);
    std::cout << r.out;
    std::cerr << r.err;
    return r.exit_code;
}
