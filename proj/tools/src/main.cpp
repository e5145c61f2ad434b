#include "flagcurv/cli.hpp"

int main(int argc, char** argv) { return flagcurv::cli::run_command_line(argc, argv); }
