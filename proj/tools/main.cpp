#include "trigbessel/cli.hpp"

int main(int argc, char** argv) { return trigbessel::cli::run(argc, argv); }
