#include "app.hpp"

int main(int argc, char** argv) { return cavkin::cli::run_cli(argc, argv); }
