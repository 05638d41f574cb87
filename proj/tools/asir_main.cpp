#include "asir/cli.hpp"

int main(int argc, char** argv) { return asir::run_cli(argc, argv); }
