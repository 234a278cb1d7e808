#include "ehrcat/cli.hpp"

int main(int argc, char** argv) { return ehrcat::cli::run({argv + 1, argv + argc}); }
