#include "mi_ellipse/cli.hpp"

int main(int argc, char** argv) { return mie::cli::run(argc, argv); }
