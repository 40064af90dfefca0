#include "pcmrbm/cli.hpp"

int main(int argc, char** argv) { return pcmrbm::run_cli(argc, argv); }
