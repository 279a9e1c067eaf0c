#pragma once

#include <cstdint>
#include <string>

#include "uentropy/config.hpp"

namespace uent {

// Exit codes: 0 success, 2 configuration/validation error, 3 data-quality
// flags raised in strict mode.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitStrict = 3;

struct RunConfig {
  KVConfig cfg;
  std::string out_dir = "out";
  int threads = 1;
  std::uint64_t seed = 42;
  bool strict = false;
};

int cmd_estimate_entropy(const RunConfig& rc);
int cmd_local_entropy(const RunConfig& rc);
int cmd_spectrum(const RunConfig& rc);
int cmd_separated_count(const RunConfig& rc);
int cmd_glue_demo(const RunConfig& rc);
int cmd_uniform_separation(const RunConfig& rc);
int cmd_irregular_demo(const RunConfig& rc);
int cmd_check(const RunConfig& rc, const std::string& theorem);

}  // namespace uent
