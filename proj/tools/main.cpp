#include "hammerfix/cli.hpp"

int main(int argc, char** argv) {
    return hammerfix::cli::run(argc, argv);
}
