// One line per acceptance criterion; exit status 0 iff all pass.
#include <cstdio>

#include "tsf/verify.hpp"

int main() {
  const auto results = tsf::verify::run_suite("all", tsf::verify::Options{});
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s  criterion %2d  %-62s  %8.2fs  %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                r.detail.c_str());
    std::fflush(stdout);
    if (!r.pass) ++failed;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
