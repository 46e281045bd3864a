#pragma once

#include <cstdint>
#include <string>

namespace toposeg::cli {

// Runs one brute-force validation suite against the engine and prints a
// PASS/FAIL line per check. Suites: persistence, edt, wasserstein, matching,
// gradient, or "all". Returns true when every check passed.
bool run_oracle_suite(const std::string& suite, int n, int size, std::uint64_t seed);

} // namespace toposeg::cli
