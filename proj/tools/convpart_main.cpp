#include "convpart/experiment.hpp"

int main(int argc, char** argv) { return convpart::cli_main(argc, argv); }
