#pragma once

#include <cstdint>

namespace moulton {

struct VerifySummary {
  int lemma_trials = 0;
  int lemma_failures = 0;
  double worst_top_eigenvalue = 0.0;    // max |raw lambda_1 - mu|
  double worst_zero_eigenvalue = 0.0;   // max |raw lambda_2|
  double worst_rest_eigenvalue = -1e300;  // max lambda_i, i >= 3
  double min_beta = 1e300;
  double worst_orthonormality = 0.0;
  int decoupling_cases = 0;
  int decoupling_failures = 0;
  double worst_off_block = 0.0;
  double worst_block_error = 0.0;

  bool ok() const { return lemma_failures == 0 && decoupling_failures == 0; }
};

/// Random-mass suites for the reduction spectrum and for the block-diagonal
/// structure of the finite-difference Hessian.
VerifySummary run_verification(std::uint64_t seed, int trials);

}  // namespace moulton
