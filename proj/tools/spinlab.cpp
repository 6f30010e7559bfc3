#include "spinlab/cli.hpp"

int main(int argc, char** argv) { return spinlab::cli::run_main(argc, argv); }
