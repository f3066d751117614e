#include "wtype/cli.hpp"

int main(int argc, char** argv) { return wtype::cli::run_cli(argc, argv); }
