#include "nsgev/commands.hpp"

int main(int argc, char** argv) { return nsgev::cli::run(argc, argv); }
