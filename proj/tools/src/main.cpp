#include "mgig_cli/cli.hpp"

int main(int argc, char** argv) { return mgig::cli::main_entry(argc, argv); }
