#include <string>
#include <vector>

#include "w11/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return w11::cli::run(args);
}
