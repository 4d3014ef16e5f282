#include "gradgeom/cli.hpp"

int main(int argc, char** argv) { return gradgeom::cli::run(argc, argv); }
