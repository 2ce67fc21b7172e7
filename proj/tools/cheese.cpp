#include "cheese/cli.hpp"

int main(int argc, char** argv) { return cheese::run_cli(argc, argv); }
