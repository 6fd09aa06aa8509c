#include "eegdn/cli/app.hpp"

int main(int argc, char** argv) { return eegdn::cli::run_cli(argc, argv); }
