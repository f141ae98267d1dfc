#include "katetov/cli.hpp"

int main(int argc, char** argv) { return katetov::cli::run(argc, argv); }
