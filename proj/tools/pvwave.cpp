#include "pvw/cli.hpp"

int main(int argc, char** argv) { return pvw::run_cli(argc, argv); }
