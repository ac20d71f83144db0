#include <iostream>

#include "millscale/cli.hpp"

int main(int argc, char** argv) {
  auto parsed = millscale::cli::parse_args(argc, argv, std::cout, std::cerr);
  if (!parsed.spec) return parsed.exit_code;
  return millscale::cli::run(*parsed.spec, std::cout, std::cerr);
}
