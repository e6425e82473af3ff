#include "commands.hpp"

int main(int argc, char** argv)
{
  return stride::cli::main(argc, argv);
}
