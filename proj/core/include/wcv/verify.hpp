#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wcv/scalar.hpp"

namespace wcv {

struct VerifyOptions {
  Mode mode = Mode::exact;
  std::uint64_t seed = 1;
  int trials = 20;
  int max_n = 3;
  Tolerances tol;
};

struct VerifyReport {
  std::string suite;
  int checks = 0;
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

// Randomized identity sweeps. Each trial derives its own generator from
// (seed, trial), so failures are reproducible from the reported seed.
VerifyReport verify_qh2(const VerifyOptions& opt);         // moment condition, all models
VerifyReport verify_triangular(const VerifyOptions& opt);  // conjugation solves + tau
VerifyReport verify_unfold(const VerifyOptions& opt);      // intertwining, etale, residues
VerifyReport verify_wcv(const VerifyOptions& opt);         // relation, det, unfolded curve

std::vector<VerifyReport> verify_all(const VerifyOptions& opt);

}  // namespace wcv
