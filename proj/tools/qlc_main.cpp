#include "qlc/cli.hpp"

int main(int argc, char** argv) { return qlc::cli_main(argc, argv); }
