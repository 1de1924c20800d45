#include "gamspline/cli.hpp"

int main(int argc, char** argv) { return gamspline::run_cli(argc, argv); }
