#include "acceptance.hpp"

#include <cstdlib>
#include <iostream>
#include <string>

int main(int argc, char** argv) {
  std::uint64_t seed = 42;
  if (argc > 1) seed = std::strtoull(argv[1], nullptr, 10);
  bool all = true;
  for (int id = 1; id <= 10; ++id) {
    const auto r = corrlab::run_criterion(id, seed, corrlab::kAcceptanceTolerance);
    std::cout << corrlab::format_line(r) << std::endl;
    all = all && r.pass;
  }
  std::cout << (all ? "all criteria pass" : "some criteria FAIL") << std::endl;
  return all ? 0 : 1;
}
