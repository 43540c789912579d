#include "isowalk/cli.hpp"

int main(int argc, char** argv) { return isowalk::run_cli(argc, argv); }
