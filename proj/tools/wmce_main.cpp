#include "wmce/cli.hpp"

int main(int argc, char** argv) { return wmce::cli_main(argc, argv); }
