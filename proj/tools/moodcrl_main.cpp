#include "moodcrl/cli/commands.hpp"

int main(int argc, char** argv) { return moodcrl::cli::run_cli(argc, argv); }
