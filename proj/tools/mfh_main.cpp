#include "cli/commands.hpp"

int main(int argc, char** argv) { return mfh::cli::run(argc, argv); }
