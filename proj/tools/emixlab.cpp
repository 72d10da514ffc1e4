#include "emix/cli.hpp"

int main(int argc, char** argv) { return emix::cli::cli_main(argc, argv); }
