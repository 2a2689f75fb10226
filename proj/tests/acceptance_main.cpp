// Acceptance suite: one pass/fail line per criterion.

#include <cstdlib>
#include <iostream>
#include <string>

#include "slerho/acceptance.hpp"

int main(int argc, char** argv) {
  slerho::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--scratch" && i + 1 < argc) {
      opts.scratch = argv[++i];
    } else if (a == "--seed" && i + 1 < argc) {
      opts.seed = std::stoull(argv[++i]);
    } else if (a == "--paths" && i + 1 < argc) {
      opts.mc_paths = std::stoull(argv[++i]);
    } else if (a == "--only" && i + 1 < argc) {
      opts.only.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--scratch DIR] [--seed N] [--paths N] [--only ID]...\n";
      return 2;
    }
  }
  int failed = 0;
  for (const auto& r : slerho::run_acceptance(opts)) {
    std::cout << slerho::format_line(r) << std::endl;
    failed += !r.pass;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? 1 : 0;
}
