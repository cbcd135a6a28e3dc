#include "pltl/cli.hpp"

int main(int argc, char** argv) { return pltl::cli::main(argc, argv); }
