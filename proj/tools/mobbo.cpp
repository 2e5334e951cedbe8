#include "mobbo/cli.hpp"

int main(int argc, char** argv) { return mobbo::cli::run_cli(argc, argv); }
