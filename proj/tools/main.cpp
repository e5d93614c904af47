#include "commands.hpp"

int main(int argc, char** argv) { return starsplit::cli::run(argc, argv); }
