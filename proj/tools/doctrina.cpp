#include <iostream>
#include <string>
#include <vector>

#include "doctrina/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto res = doctrina::run_command(args);
  std::cout << res.output;
  return res.status;
}
