#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rsn {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

// Named check groups: "oracle", "couplings", "rates", or "all". Unknown names raise
// DomainError.
std::vector<CheckResult> run_suite(const std::string& suite, std::uint64_t seed, int threads);
// Every line of a network JSON-lines file must parse and be a complete sorting network.
std::vector<CheckResult> verify_network_file(const std::string& path);

// "name: PASS" or "name: FAIL (detail)" per line; returns true iff all passed.
bool print_results(std::ostream& os, const std::vector<CheckResult>& results);

}  // namespace rsn
