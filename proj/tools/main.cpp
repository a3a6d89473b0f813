#include <iostream>

#include "sigmadep/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const sigmadep::cli::Outcome out = sigmadep::cli::run(args, std::cin);
  std::cout << out.output;
  return out.exit_code;
}
