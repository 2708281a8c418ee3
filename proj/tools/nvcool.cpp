#include <iostream>

#include "nvcool/cli.hpp"

int main(int argc, char** argv) {
    return nvcool::cli_main(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
