#include "ecmds/cli.hpp"

int main(int argc, char** argv) { return ecmds::cli_main(argc, argv); }
