#include "dhtlab/cli.hpp"

int main(int argc, char** argv) { return dhtlab::cli::run(argc, argv); }
