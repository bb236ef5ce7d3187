#include "ttsched/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return ttsched::run_cli(argc, argv, std::cout, std::cerr);
}
