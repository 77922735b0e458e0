#include "ldsim/cli.hpp"

int main(int argc, char** argv) { return ldsim::run_cli(argc, argv); }
