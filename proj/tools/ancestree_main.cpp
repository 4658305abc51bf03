#include "ancestree/cli.hpp"

int main(int argc, char** argv) { return ancestree::cli::run(argc, argv); }
