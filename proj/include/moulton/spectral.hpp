#pragma once

#include <vector>

#include <Eigen/Dense>

#include "moulton/cc_core.hpp"

namespace moulton {

/// Eigen-data of D = mu I + M^{-1} B.
///
/// lambdas are sorted descending with lambdas[0] = mu and lambdas[1] = 0
/// set exactly; raw_lambdas holds the unsnapped eigenvalues of the
/// symmetric form for diagnostics. Column i of eigenvectors is v_{i+1};
/// the columns are orthonormal in the mass inner product.
struct ReductionSpectrum {
  Eigen::VectorXd lambdas;
  Eigen::VectorXd raw_lambdas;
  Eigen::MatrixXd eigenvectors;
  std::vector<double> betas;
  double mu = 0.0;
};

Eigen::MatrixXd hessian_B(const CollinearConfig& config);

Eigen::MatrixXd reduction_matrix_D(const CollinearConfig& config);

/// mu I + M^{-1/2} B M^{-1/2}, similar to D and symmetric.
Eigen::MatrixXd reduction_matrix_D_tilde(const CollinearConfig& config);

ReductionSpectrum spectrum_and_betas(const CollinearConfig& config);

/// For u on the boundary of the ordered cone
///   K = { u : sum m_i u_i = 0, u_1 <= ... <= u_n },
/// checks that every maximal run u_i = ... = u_j opens up under
/// du/dt = M^{-1} B u, i.e. du_j/dt - du_i/dt > 0.
bool cone_monotonicity_check(const CollinearConfig& config, const Eigen::VectorXd& u);

}  // namespace moulton
