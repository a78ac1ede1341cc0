#include "bisched/cli.hpp"

int main(int argc, char** argv) { return bisched::cli::run(argc, argv); }
