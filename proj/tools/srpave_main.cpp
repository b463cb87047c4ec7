#include "srpave/cli.hpp"

int main(int argc, char** argv) { return srpave::cli::main(argc, argv); }
