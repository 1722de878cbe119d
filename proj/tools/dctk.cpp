#include "dctk/cli.hpp"

int main(int argc, char** argv) { return dctk::cli::run(argc, argv); }
