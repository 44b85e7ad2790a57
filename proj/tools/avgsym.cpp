#include "avgsym/cli.hpp"

int main(int argc, char** argv) { return avgsym::cli::run(argc, argv); }
