#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "srpave/linalg.hpp"
#include "srpave/multi_affine.hpp"

namespace srpave::verify {

struct SuiteConfig {
  int n = 0;             // largest instance size; 0 picks the suite default
  int count = 0;         // instances; 0 picks the suite default
  std::uint64_t seed = 1;
  double tol = 0.0;      // comparison tolerance; 0 picks the suite default
  int threads = 0;       // 0: hardware concurrency
  double delta = 0.0;    // sr-paving only; 0 runs 0.5 and 0.25
};

struct InstanceResult {
  int index = 0;
  int n = 0;
  bool ok = true;
  /// Identifiers of the violated invariants, comma separated.
  std::string failure;
  std::string note;
  std::vector<std::pair<std::string, double>> values;

  void value(const std::string& key, double v) { values.emplace_back(key, v); }
  void require(bool cond, const std::string& invariant);
};

struct SuiteReport {
  std::string suite;
  std::string statement;
  SuiteConfig config;  // with defaults filled in
  std::vector<InstanceResult> instances;
  int passed = 0;
  int failed = 0;
  std::vector<std::pair<std::string, double>> summary;
  double runtime_ms = 0.0;

  bool ok() const { return failed == 0; }
};

struct SuiteInfo {
  std::string name;
  std::string statement;
  int default_n;
  int default_count;
  double default_tol;
};

/// Every suite, in a fixed order.
const std::vector<SuiteInfo>& registry();

/// Runs one suite. Instance i draws from its own generator seeded with
/// (seed, suite position, i), so reports do not depend on the thread count.
/// Throws InvalidInput for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

// ---- instance generators shared with the tests -----------------------------

/// Seeded generator for instance i of the suite at position k.
std::mt19937_64 instance_rng(std::uint64_t seed, int suite, int index);

/// Kernel polynomial of a random strongly Rayleigh process on exactly n points.
MultiAffine random_kernel_poly(int n, std::mt19937_64& rng);

struct PavingInstance {
  linalg::Matrix k;
  MultiAffine g;  // det(Z - K)
  double alpha = 0.0;
};
/// PSD contraction scaled so its largest diagonal entry is at most
/// (r-1)^2/r^2 times a uniform factor in [0.2, 1].
PavingInstance random_paving_instance(int n, int r, std::mt19937_64& rng);

}  // namespace srpave::verify
