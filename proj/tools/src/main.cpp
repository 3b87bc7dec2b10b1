#include "levytrim_cli/cli.hpp"

int main(int argc, char** argv) { return levytrim::cli::run(argc, argv); }
