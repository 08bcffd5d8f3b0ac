#include "cli.hpp"

int main(int argc, char** argv) { return spinrestore::cli::main(argc, argv); }
