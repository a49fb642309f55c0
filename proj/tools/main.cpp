#include "commands.hpp"

int main(int argc, char** argv) { return qiseg::cli::run(argc, argv); }
