#include "wavecrit/cli.hpp"

int main(int argc, char** argv) { return wavecrit::cli::run_cli(argc, argv); }
