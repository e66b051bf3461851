#include "lfperf/cli.hpp"

int main(int argc, char** argv) { return lfperf::run_cli(argc, argv); }
