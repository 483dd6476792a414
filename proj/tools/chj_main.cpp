#include "chj/cli.hpp"

int main(int argc, char** argv) { return chj::cli_main(argc, argv); }
