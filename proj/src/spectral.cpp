#include "moulton/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace moulton {

namespace {

constexpr double kSeparationTol = 1e-8;

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (v[k] < 0.0) v = -v;
}

}  // namespace

Eigen::MatrixXd hessian_B(const CollinearConfig& config) {
  const Eigen::VectorXd m = config.masses.as_eigen();
  const Eigen::VectorXd& a = config.positions;
  const Eigen::Index n = a.size();
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double v = m[i] * m[j] / std::pow(std::abs(a[i] - a[j]), 3);
      b(i, j) = v;
      b(j, i) = v;
      b(i, i) -= v;
      b(j, j) -= v;
    }
  }
  return b;
}

Eigen::MatrixXd reduction_matrix_D(const CollinearConfig& config) {
  const Eigen::VectorXd m = config.masses.as_eigen();
  Eigen::MatrixXd d = m.cwiseInverse().asDiagonal() * hessian_B(config);
  d.diagonal().array() += config.mu;
  return d;
}

Eigen::MatrixXd reduction_matrix_D_tilde(const CollinearConfig& config) {
  const Eigen::VectorXd s = config.masses.as_eigen().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd d = s.asDiagonal() * hessian_B(config) * s.asDiagonal();
  d = 0.5 * (d + d.transpose());
  d.diagonal().array() += config.mu;
  return d;
}

ReductionSpectrum spectrum_and_betas(const CollinearConfig& config) {
  const Eigen::VectorXd m = config.masses.as_eigen();
  const Eigen::Index n = m.size();
  const double mu = config.mu;
  const Eigen::MatrixXd dt = reduction_matrix_D_tilde(config);
  const double scale = std::max(1.0, dt.cwiseAbs().rowwise().sum().maxCoeff());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(dt, Eigen::EigenvaluesOnly);
  Eigen::VectorXd raw = full.eigenvalues().reverse();
  if (std::abs(raw[0] - mu) > kSeparationTol * scale || raw[0] - raw[1] <= kSeparationTol * scale ||
      std::abs(raw[1]) > kSeparationTol * scale) {
    throw Error(ErrorKind::SpectralDegeneracy, "spectrum_and_betas",
                "top eigenvalues " + std::to_string(raw[0]) + ", " + std::to_string(raw[1]) +
                    " do not separate as mu=" + std::to_string(mu) + ", 0");
  }

  ReductionSpectrum out;
  out.mu = mu;
  out.raw_lambdas = raw;
  out.lambdas = Eigen::VectorXd(n);
  out.lambdas[0] = mu;
  out.lambdas[1] = 0.0;
  out.eigenvectors = Eigen::MatrixXd(n, n);
  out.eigenvectors.col(0).setOnes();
  out.eigenvectors.col(1) = config.positions;

  if (n > 2) {
    // Restrict the symmetric form to the complement of the two known
    // eigenvectors so the remaining spectrum cannot mix with them.
    const Eigen::VectorXd sqrt_m = m.cwiseSqrt();
    Eigen::MatrixXd known(n, 2);
    known.col(0) = sqrt_m;
    known.col(1) = sqrt_m.cwiseProduct(config.positions);
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(known);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
    const Eigen::MatrixXd c = q.rightCols(n - 2);
    Eigen::MatrixXd reduced = c.transpose() * dt * c;
    reduced = 0.5 * (reduced + reduced.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rest(reduced);
    for (Eigen::Index k = 0; k < n - 2; ++k) {
      const Eigen::Index src = n - 3 - k;  // descending order
      out.lambdas[k + 2] = rest.eigenvalues()[src];
      Eigen::VectorXd v = sqrt_m.cwiseInverse().cwiseProduct(c * rest.eigenvectors().col(src));
      fix_sign(v);
      out.eigenvectors.col(k + 2) = v;
      out.betas.push_back(-out.lambdas[k + 2] / mu);
    }
  }
  return out;
}

bool cone_monotonicity_check(const CollinearConfig& config, const Eigen::VectorXd& u) {
  const Eigen::VectorXd m = config.masses.as_eigen();
  const Eigen::VectorXd& a = config.positions;
  const Eigen::Index n = a.size();
  if (u.size() != n) {
    throw Error(ErrorKind::WrongArity, "cone_monotonicity_check",
                "u has " + std::to_string(u.size()) + " entries, expected " + std::to_string(n));
  }
  const double umax = u.cwiseAbs().maxCoeff();
  const double eq_tol = 1e-12 * umax;
  if (umax == 0.0 || u.maxCoeff() - u.minCoeff() <= eq_tol) {
    throw Error(ErrorKind::NotBoundaryPoint, "cone_monotonicity_check", "u is constant");
  }
  for (Eigen::Index i = 1; i < n; ++i) {
    if (u[i] < u[i - 1] - eq_tol) {
      throw Error(ErrorKind::InvalidArgument, "cone_monotonicity_check", "u is not ordered");
    }
  }
  if (std::abs(m.dot(u)) > 1e-10 * umax) {
    throw Error(ErrorKind::InvalidArgument, "cone_monotonicity_check",
                "u violates the centre-of-mass constraint");
  }

  const Eigen::VectorXd udot = m.cwiseInverse().asDiagonal() * (hessian_B(config) * u);
  bool any_run = false;
  bool all_open = true;
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && u[j + 1] - u[i] <= eq_tol) ++j;
    if (j > i) {
      any_run = true;
      if (!(udot[j] - udot[i] > 0.0)) all_open = false;
    }
    i = j + 1;
  }
  if (!any_run) {
    throw Error(ErrorKind::NotBoundaryPoint, "cone_monotonicity_check",
                "u has no equal consecutive entries");
  }
  return all_open;
}

}  // namespace moulton
