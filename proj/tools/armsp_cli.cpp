#include "armsp/harness/cli.hpp"

int main(int argc, char** argv) { return armsp::cli_main(argc, argv); }
