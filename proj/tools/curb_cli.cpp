#include "curb/cli.hpp"

int main(int argc, char** argv) { return curb::cli::run(argc, argv); }
