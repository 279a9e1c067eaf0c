#pragma once

#include <string>
#include <vector>

#include "uentropy/local_entropy.hpp"
#include "uentropy/multifractal.hpp"
#include "uentropy/separation.hpp"

namespace uent {

// Named verification suites run by `uentropy check <name>`. Each row carries
// both sides of the inequality being exercised and a verdict. Instances are
// shipped in code so the suites run without configuration.
struct CheckRow {
  std::string instance;
  double lhs = 0.0;
  double rhs = 0.0;
  double tolerance = 0.0;
  std::string verdict;  // PASS / FAIL / hypothesis_not_met
  std::string detail;
};

struct CheckReport {
  std::string name;
  std::vector<CheckRow> rows;
  bool all_pass() const;
};

// Entropy distribution principle, upper bound direction (3 instances).
CheckReport check_a_upper(int threads = 1);
// Entropy distribution principle, lower bound direction (3 instances).
CheckReport check_a_lower(int threads = 1);
// Variational principle for compact subsets (4 instances; equality expected
// on the maximal-measure ones).
CheckReport check_b(int threads = 1);
// Level-set spectrum bound on the shipped symbolic systems.
CheckReport check_c3(int threads = 1);
// Uniform-separation probes.
CheckReport check_d1(int threads = 1);
// Separation-rate bracket for ergodic oracles.
CheckReport check_d2(int threads = 1);

CheckReport run_check(const std::string& theorem, int threads = 1);
std::vector<std::string> known_checks();

}  // namespace uent
