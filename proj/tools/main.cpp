#include "twctv/cli.hpp"

int main(int argc, char** argv) { return twctv::cli_main(argc, argv); }
