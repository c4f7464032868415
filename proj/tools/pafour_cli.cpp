#include "cli_app.hpp"

int main(int argc, char** argv)
{
    return pafour::cli::run(argc, argv);
}
