#include "cli.hpp"

int main(int argc, char** argv) { return hypercover::cli::run(argc, argv); }
