#pragma once

// Acceptance checks, one per criterion. Shared by the acceptance test binary
// and `qmem selftest`.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qmem::checks {

struct CheckResult {
  int id{};
  std::string name;
  bool pass{false};
  std::string detail;
  double seconds{};
};

struct AcceptanceOptions {
  std::uint64_t seed{20261015};
  unsigned threads{1};
};

/// Collects every memory quaternion produced by the scenarios so physicality
/// can be judged over all of them at the end.
struct PhysicalityLog {
  struct Entry {
    std::string scenario;
    double ratio;  ///< minkowski(m, m) / m0^2
  };
  std::vector<Entry> entries;
};

CheckResult check_algebra(const AcceptanceOptions& options);
CheckResult check_transfer_identities(const AcceptanceOptions& options);
CheckResult check_point_even_numeric(const AcceptanceOptions& options);
CheckResult check_rectangular_formula(const AcceptanceOptions& options, PhysicalityLog& log);
CheckResult check_small_bandwidth(const AcceptanceOptions& options, PhysicalityLog& log);
CheckResult check_spinor_round_trip(const AcceptanceOptions& options);
CheckResult check_time_frequency(const AcceptanceOptions& options, PhysicalityLog& log);
CheckResult check_nonlocal_law(const AcceptanceOptions& options, PhysicalityLog& log);
CheckResult check_physicality(const PhysicalityLog& log);
CheckResult check_optimizer(const AcceptanceOptions& options, PhysicalityLog& log);

/// Runs all ten in criterion order.
std::vector<CheckResult> run_acceptance(const AcceptanceOptions& options);

/// "[PASS] 3 name: detail (1.23 s)"
std::string format_line(const CheckResult& result);

}  // namespace qmem::checks
