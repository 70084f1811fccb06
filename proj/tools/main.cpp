#include "cli.hpp"

int main(int argc, char** argv) { return mirkit::cli::run(argc, argv); }
