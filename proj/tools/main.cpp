#include <string>
#include <vector>

#include "quasifix/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return quasifix::run(args);
}
