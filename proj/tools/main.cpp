#include "cli.hpp"

int main(int argc, char** argv) { return respole::cli::run_cli(argc, argv); }
