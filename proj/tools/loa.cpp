#include "loa/cli.hpp"

int main(int argc, char** argv) { return loa::cli::run(argc, argv); }
