#include "cli.hpp"

int main(int argc, char** argv) { return ghermite::cli::run(argc, argv); }
