#include "qcg/cli.hpp"

int main(int argc, char** argv)
{
    return qcg::cli::run_command(argc, argv);
}
