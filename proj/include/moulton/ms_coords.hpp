#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "moulton/cc_core.hpp"
#include "moulton/spectral.hpp"

namespace moulton {

/// A = V (x) I_2 where the columns of V are 1, a, v_3, ..., v_n. Satisfies
/// A^T M A = I for the block mass matrix M = diag(m_1, m_1, ..., m_n, m_n).
struct MeyerSchmidtBasis {
  Eigen::MatrixXd A;
};

struct OrbitParams {
  double e = 0.0;
  double p = 1.0;
  double sigma = 1.0;
  double mu = 1.0;

  double radius(double theta) const;
};

/// Orbit scale with sigma = (mu p)^{1/4}. p defaults to 1 - e^2.
OrbitParams make_orbit(double mu, double e, std::optional<double> p = std::nullopt);

MeyerSchmidtBasis build_A(const CollinearConfig& config, const ReductionSpectrum& spectrum);

/// Potential in the reduced variables (z, w_1, ..., w_{n-2}).
double potential_U_new(const Eigen::Vector2d& z, const std::vector<Eigen::Vector2d>& w,
                       const CollinearConfig& config, const ReductionSpectrum& spectrum);

/// Position blocks [H_zz, H_w1w1, ...] of the linearized Hamiltonian along
/// the elliptic homographic solution, as functions of the true anomaly.
std::vector<Eigen::Matrix2d> hessian_blocks_analytic(const std::vector<double>& betas, double e,
                                                     double theta);

struct FdOptions {
  double h = 1e-5;
  bool richardson = true;
  std::optional<double> p;
};

/// Central-difference Hessian of the position part
///   (p - r)/(2p) (|z|^2 + sum |w_k|^2) - (r/sigma) U(z, w)
/// at z = (sigma, 0), w = 0. Variables ordered (z, w_1, ..., w_{n-2}).
Eigen::MatrixXd hessian_blocks_fd(const CollinearConfig& config, const ReductionSpectrum& spectrum,
                                  double e, double theta, const FdOptions& opts = {});

/// Finite-difference Hessian of U itself at the same point.
Eigen::MatrixXd potential_hessian_fd(const CollinearConfig& config,
                                     const ReductionSpectrum& spectrum, double sigma,
                                     const FdOptions& opts = {});

}  // namespace moulton
