#include "resolute/cli.hpp"

int main(int argc, char** argv) { return resolute::run_command(argc, argv); }
