#include "quartic/cli.hpp"

int main(int argc, char** argv) { return quartic::cli::main(argc, argv); }
