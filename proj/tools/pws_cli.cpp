#include "pws/commands.hpp"

int main(int argc, char** argv) { return pws::run_cli(argc, argv); }
