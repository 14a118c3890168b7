#include "emstab/cli/app.hpp"

int main(int argc, char** argv) { return emstab::cli::run(argc, argv); }
