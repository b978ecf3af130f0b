#include "commands.hpp"

int main(int argc, char** argv) { return stpp::cli::run(argc, argv); }
