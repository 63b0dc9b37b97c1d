// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fail.

#include <cstdio>
#include <cstdlib>

#include "qmem_checks/acceptance.hpp"

int main() {
  qmem::checks::AcceptanceOptions options;
  if (const char* env = std::getenv("QMEM_THREADS")) options.threads = static_cast<unsigned>(std::atoi(env));
  const auto results = qmem::checks::run_acceptance(options);
  int failed = 0;
  for (const auto& r : results) {
    std::printf("%s\n", qmem::checks::format_line(r).c_str());
    if (!r.pass) ++failed;
  }
  std::printf("%zu criteria, %d failed\n", results.size(), failed);
  return failed == 0 ? 0 : 1;
}
