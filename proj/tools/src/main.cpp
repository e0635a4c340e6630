#include "mildflow_cli/cli.hpp"

int main(int argc, char** argv) { return mildflow::cli::main(argc, argv); }
