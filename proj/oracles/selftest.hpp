#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mts::selftest {

/// Deliberate corruption of one solver's output, used to prove the suites bite.
enum class Fault { None, Compute, Bandwidth, Association, Admission };

Fault parse_fault(std::string_view name);

struct SuiteResult {
  std::string name;
  int instances = 0;
  int failures = 0;  // failed checks; one instance can fail several
  double worst_error = 0.0;     // largest relative objective gap (or mismatch count)
  double worst_residual = 0.0;  // compute suite only: KKT stationarity
  double seconds = 0.0;
  std::string first_failure;

  bool passed() const { return instances > 0 && failures == 0; }
};

// Tolerances shared with the acceptance suite.
inline constexpr double kObjectiveRelTol = 1e-6;
inline constexpr double kKktTol = 1e-6;
inline constexpr double kGridStepFrac = 1e-4;

/// Random instances with U <= 5 users over K <= 2 SBSs against the grid oracle.
SuiteResult compute_suite(int instances, std::uint64_t seed, Fault fault = Fault::None);
/// Random feasible instances with U <= 6 against LP vertex enumeration.
SuiteResult bandwidth_suite(int instances, std::uint64_t seed, Fault fault = Fault::None);
/// Random instances (ties and eligibility masks included) against enumeration.
SuiteResult association_suite(int instances, std::uint64_t seed, Fault fault = Fault::None);
/// Random instances with U <= 10 against the 2^U enumeration.
SuiteResult admission_suite(int instances, std::uint64_t seed, Fault fault = Fault::None);
/// Random queue traces against a loop-based replay.
SuiteResult queue_suite(int instances, std::uint64_t seed);
/// Channel formulas against their natural-log re-derivation.
SuiteResult channel_suite(int instances, std::uint64_t seed);

std::vector<SuiteResult> run_all(Fault fault = Fault::None, std::uint64_t seed = 2024);

}  // namespace mts::selftest
