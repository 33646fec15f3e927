#include "rdlwe/cli.hpp"

int main(int argc, char** argv) { return rdlwe::cli::dispatch(argc, argv); }
