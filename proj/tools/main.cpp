#include "dp4/cli.hpp"

int main(int argc, char** argv) { return dp4::run_cli(argc, argv); }
