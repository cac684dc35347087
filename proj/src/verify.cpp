#include "moulton/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "moulton/ms_coords.hpp"
#include "moulton/spectral.hpp"

namespace moulton {

namespace {

MassVector random_masses(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> raw(static_cast<std::size_t>(n));
  for (double& x : raw) x = u(rng);
  return normalize_masses(raw);
}

}  // namespace

VerifySummary run_verification(std::uint64_t seed, int trials) {
  VerifySummary s;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick_n(3, 8);

  for (int t = 0; t < trials; ++t) {
    const int n = pick_n(rng);
    const CollinearConfig cfg = solve_collinear_cc(random_masses(rng, n));
    const ReductionSpectrum sp = spectrum_and_betas(cfg);
    const double top = std::abs(sp.raw_lambdas[0] - cfg.mu);
    const double zero = std::abs(sp.raw_lambdas[1]);
    const double rest = n > 2 ? sp.raw_lambdas.tail(n - 2).maxCoeff() : -1e300;
    const double min_beta = *std::min_element(sp.betas.begin(), sp.betas.end());
    const Eigen::MatrixXd gram =
        sp.eigenvectors.transpose() * cfg.masses.as_eigen().asDiagonal() * sp.eigenvectors;
    const double orth = (gram - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();
    const bool simple = sp.raw_lambdas[0] - sp.raw_lambdas[1] > 1e-8;
    s.worst_top_eigenvalue = std::max(s.worst_top_eigenvalue, top);
    s.worst_zero_eigenvalue = std::max(s.worst_zero_eigenvalue, zero);
    s.worst_rest_eigenvalue = std::max(s.worst_rest_eigenvalue, rest);
    s.min_beta = std::min(s.min_beta, min_beta);
    s.worst_orthonormality = std::max(s.worst_orthonormality, orth);
    ++s.lemma_trials;
    if (!(top <= 1e-9 && zero <= 1e-9 && rest <= 1e-9 && min_beta >= -1e-12 && orth <= 1e-10 &&
          simple)) {
      ++s.lemma_failures;
    }
  }

  for (int n = 3; n <= 5; ++n) {
    const CollinearConfig cfg = solve_collinear_cc(random_masses(rng, n));
    const ReductionSpectrum sp = spectrum_and_betas(cfg);
    for (double e : {0.0, 0.3, 0.7}) {
      for (double theta : {0.0, std::numbers::pi / 3.0, std::numbers::pi}) {
        const Eigen::MatrixXd h = hessian_blocks_fd(cfg, sp, e, theta);
        const auto blocks = hessian_blocks_analytic(sp.betas, e, theta);
        double off = 0.0, err = 0.0;
        for (int a = 0; a < n - 1; ++a) {
          for (int b = 0; b < n - 1; ++b) {
            const Eigen::Matrix2d blk = h.block(2 * a, 2 * b, 2, 2);
            if (a == b) {
              err = std::max(err, (blk - blocks[static_cast<std::size_t>(a)]).cwiseAbs().maxCoeff());
            } else {
              off = std::max(off, blk.cwiseAbs().maxCoeff());
            }
          }
        }
        s.worst_off_block = std::max(s.worst_off_block, off);
        s.worst_block_error = std::max(s.worst_block_error, err);
        ++s.decoupling_cases;
        if (!(off <= 1e-6 && err <= 1e-6)) ++s.decoupling_failures;
      }
    }
  }
  return s;
}

}  // namespace moulton
