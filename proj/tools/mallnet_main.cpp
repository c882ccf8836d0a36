#include "mallnet/cli.hpp"

int main(int argc, char** argv) { return mall::run_cli(argc, argv); }
