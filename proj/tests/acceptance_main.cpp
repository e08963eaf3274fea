#include <cstdio>
#include <cstdlib>
#include <string>

#include "amoebakit/acceptance.hpp"

// Usage: acceptance [criterion ...]
int main(int argc, char** argv) {
  amoebakit::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) opts.criteria.push_back(std::atoi(argv[i]));
  const auto report = amoebakit::run_acceptance(opts);
  for (const auto& r : report.results) std::printf("%s\n", amoebakit::summary_line(r).c_str());
  std::printf("%s\n", report.pass() ? "acceptance PASS" : "acceptance FAIL");
  return report.pass() ? 0 : 1;
}
