#include "asl/cli.hpp"

int main(int argc, char** argv) {
    return asl::cli_run({argv + 1, argv + argc});
}
