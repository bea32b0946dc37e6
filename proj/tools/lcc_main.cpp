#include "lcc/cli.hpp"

int main(int argc, char** argv) { return lcc::cli::run(argc, argv); }
