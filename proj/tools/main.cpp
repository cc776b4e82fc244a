#include "hypcurv/cli.hpp"

int main(int argc, char** argv) { return hypcurv::cli_main(argc, argv); }
