#include "csdelay/cli/app.hpp"

int main(int argc, char** argv) { return csdelay::cli::run(argc, argv); }
