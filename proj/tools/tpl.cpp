#include "tpl/cli.hpp"

int main(int argc, char** argv) { return tpl::cli::main(argc, argv); }
