#include <iostream>

#include "nsbf/cli/acceptance.hpp"

int main(int argc, char** argv) {
  nsbf::cli::AcceptanceOptions options;
  for (int i = 1; i < argc; ++i)
    if (std::string(argv[i]) == "--quick") options.quick = true;
  const auto results = nsbf::cli::run_acceptance(options, std::cerr);
  return nsbf::cli::print_acceptance(results, std::cout) ? 0 : 1;
}
