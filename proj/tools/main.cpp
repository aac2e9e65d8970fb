#include "spacings/cli.hpp"

int main(int argc, char** argv) { return spacings::cli_main(argc, argv); }
