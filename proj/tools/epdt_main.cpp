#include "epdt/cli.hpp"

int main(int argc, char** argv) { return epdt::cli_dispatch(argc, argv); }
