#include "fimhom/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return fimhom::cli::run(std::move(args), std::cout, std::cerr, std::cin);
}
