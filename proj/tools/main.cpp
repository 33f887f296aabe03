#include "app.hpp"

int main(int argc, char** argv) { return mdg::cli::main(argc, argv); }
