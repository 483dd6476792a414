#include <cstdlib>
#include <iostream>
#include <vector>

#include "chj/acceptance.hpp"

// With no arguments every criterion runs; otherwise only the listed ids.
int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  const auto results = chj::run_acceptance(ids, std::cout);
  for (const auto& r : results)
    if (!r.pass) return 1;
  return 0;
}
