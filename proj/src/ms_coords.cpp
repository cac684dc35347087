#include "moulton/ms_coords.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace moulton {

namespace {

using ld = long double;
using VecL = Eigen::Matrix<ld, Eigen::Dynamic, 1>;

constexpr double kMinStep = 1e-7;
constexpr double kMaxStep = 1e-3;

void check_spectrum(const CollinearConfig& config, const ReductionSpectrum& spectrum,
                    const char* op) {
  const auto n = static_cast<Eigen::Index>(config.size());
  if (spectrum.eigenvectors.rows() != n || spectrum.eigenvectors.cols() != n) {
    throw Error(ErrorKind::BasisMismatch, op,
                "spectrum has " + std::to_string(spectrum.eigenvectors.rows()) +
                    " rows for " + std::to_string(n) + " bodies");
  }
}

// U on the flattened vector x = (z, w_1, ..., w_{n-2}) in extended precision.
ld potential_flat(const VecL& x, const Eigen::VectorXd& m, const Eigen::MatrixXd& v) {
  const Eigen::Index n = m.size();
  ld u = 0.0L;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      ld dx = 0.0L, dy = 0.0L;
      for (Eigen::Index k = 1; k < n; ++k) {
        const ld c = static_cast<ld>(v(i, k)) - static_cast<ld>(v(j, k));
        dx += c * x[2 * (k - 1)];
        dy += c * x[2 * (k - 1) + 1];
      }
      const ld d = std::sqrt(dx * dx + dy * dy);
      if (d < 1e-12L) {
        throw Error(ErrorKind::Collision, "potential_U_new",
                    "bodies " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                        " collide");
      }
      u += static_cast<ld>(m[i]) * static_cast<ld>(m[j]) / d;
    }
  }
  return u;
}

Eigen::MatrixXd central_hessian(const std::function<ld(const VecL&)>& f, const VecL& x0, ld h) {
  const Eigen::Index dim = x0.size();
  Eigen::MatrixXd hess(dim, dim);
  const ld f0 = f(x0);
  for (Eigen::Index i = 0; i < dim; ++i) {
    VecL xp = x0, xm = x0;
    xp[i] += h;
    xm[i] -= h;
    hess(i, i) = static_cast<double>((f(xp) - 2.0L * f0 + f(xm)) / (h * h));
    for (Eigen::Index j = i + 1; j < dim; ++j) {
      VecL pp = x0, pm = x0, mp = x0, mm = x0;
      pp[i] += h; pp[j] += h;
      pm[i] += h; pm[j] -= h;
      mp[i] -= h; mp[j] += h;
      mm[i] -= h; mm[j] -= h;
      const ld val = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0L * h * h);
      hess(i, j) = static_cast<double>(val);
      hess(j, i) = hess(i, j);
    }
  }
  return hess;
}

Eigen::MatrixXd fd_hessian(const std::function<ld(const VecL&)>& f, const VecL& x0,
                           const FdOptions& opts, const char* op) {
  if (opts.h < kMinStep) {
    throw Error(ErrorKind::StepTooSmall, op, "h=" + std::to_string(opts.h));
  }
  if (opts.h > kMaxStep) {
    throw Error(ErrorKind::StepTooLarge, op, "h=" + std::to_string(opts.h));
  }
  const ld h = opts.h;
  Eigen::MatrixXd coarse = central_hessian(f, x0, h);
  if (!opts.richardson) return coarse;
  Eigen::MatrixXd fine = central_hessian(f, x0, h / 2.0L);
  return (4.0 * fine - coarse) / 3.0;
}

VecL base_point(Eigen::Index n, double sigma) {
  VecL x = VecL::Zero(2 * (n - 1));
  x[0] = sigma;
  return x;
}

}  // namespace

double OrbitParams::radius(double theta) const { return p / (1.0 + e * std::cos(theta)); }

OrbitParams make_orbit(double mu, double e, std::optional<double> p) {
  if (!(e >= 0.0 && e < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "make_orbit",
                "eccentricity " + std::to_string(e) + " outside [0,1)");
  }
  OrbitParams orbit;
  orbit.e = e;
  orbit.mu = mu;
  orbit.p = p.value_or(1.0 - e * e);
  if (!(orbit.p > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "make_orbit", "p must be positive");
  }
  orbit.sigma = std::pow(mu * orbit.p, 0.25);
  return orbit;
}

MeyerSchmidtBasis build_A(const CollinearConfig& config, const ReductionSpectrum& spectrum) {
  check_spectrum(config, spectrum, "build_A");
  const auto n = static_cast<Eigen::Index>(config.size());
  const Eigen::VectorXd m = config.masses.as_eigen();
  MeyerSchmidtBasis basis;
  basis.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  Eigen::VectorXd mdiag(2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    mdiag[2 * i] = m[i];
    mdiag[2 * i + 1] = m[i];
    for (Eigen::Index k = 0; k < n; ++k) {
      basis.A(2 * i, 2 * k) = spectrum.eigenvectors(i, k);
      basis.A(2 * i + 1, 2 * k + 1) = spectrum.eigenvectors(i, k);
    }
  }
  const Eigen::MatrixXd gram = basis.A.transpose() * mdiag.asDiagonal() * basis.A;
  const double dev = (gram - Eigen::MatrixXd::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff();
  if (dev > 1e-8) {
    throw Error(ErrorKind::BasisMismatch, "build_A",
                "A^T M A deviates from identity by " + std::to_string(dev));
  }
  return basis;
}

double potential_U_new(const Eigen::Vector2d& z, const std::vector<Eigen::Vector2d>& w,
                       const CollinearConfig& config, const ReductionSpectrum& spectrum) {
  check_spectrum(config, spectrum, "potential_U_new");
  const auto n = static_cast<Eigen::Index>(config.size());
  if (static_cast<Eigen::Index>(w.size()) != n - 2) {
    throw Error(ErrorKind::WrongArity, "potential_U_new",
                "expected " + std::to_string(n - 2) + " w vectors, got " +
                    std::to_string(w.size()));
  }
  VecL x(2 * (n - 1));
  x[0] = z[0];
  x[1] = z[1];
  for (std::size_t k = 0; k < w.size(); ++k) {
    x[2 * (k + 1)] = w[k][0];
    x[2 * (k + 1) + 1] = w[k][1];
  }
  return static_cast<double>(potential_flat(x, config.masses.as_eigen(), spectrum.eigenvectors));
}

std::vector<Eigen::Matrix2d> hessian_blocks_analytic(const std::vector<double>& betas, double e,
                                                     double theta) {
  if (!(e >= 0.0 && e < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "hessian_blocks_analytic",
                "eccentricity " + std::to_string(e) + " outside [0,1)");
  }
  const double c = e * std::cos(theta);
  std::vector<Eigen::Matrix2d> blocks;
  Eigen::Matrix2d hzz = Eigen::Matrix2d::Zero();
  hzz(0, 0) = -(2.0 - c) / (1.0 + c);
  hzz(1, 1) = 1.0;
  blocks.push_back(hzz);
  for (double b : betas) {
    Eigen::Matrix2d hww = Eigen::Matrix2d::Zero();
    hww(0, 0) = -(2.0 * b + 2.0 - c) / (1.0 + c);
    hww(1, 1) = (b + 1.0 + c) / (1.0 + c);
    blocks.push_back(hww);
  }
  return blocks;
}

Eigen::MatrixXd hessian_blocks_fd(const CollinearConfig& config, const ReductionSpectrum& spectrum,
                                  double e, double theta, const FdOptions& opts) {
  check_spectrum(config, spectrum, "hessian_blocks_fd");
  const OrbitParams orbit = make_orbit(config.mu, e, opts.p);
  const Eigen::VectorXd m = config.masses.as_eigen();
  const Eigen::MatrixXd& v = spectrum.eigenvectors;
  const ld p = orbit.p;
  const ld r = orbit.radius(theta);
  const ld sigma = orbit.sigma;
  auto h_pos = [&](const VecL& x) {
    return (p - r) / (2.0L * p) * x.squaredNorm() - r / sigma * potential_flat(x, m, v);
  };
  return fd_hessian(h_pos, base_point(static_cast<Eigen::Index>(config.size()), orbit.sigma),
                    opts, "hessian_blocks_fd");
}

Eigen::MatrixXd potential_hessian_fd(const CollinearConfig& config,
                                     const ReductionSpectrum& spectrum, double sigma,
                                     const FdOptions& opts) {
  check_spectrum(config, spectrum, "potential_hessian_fd");
  const Eigen::VectorXd m = config.masses.as_eigen();
  const Eigen::MatrixXd& v = spectrum.eigenvectors;
  auto u = [&](const VecL& x) { return potential_flat(x, m, v); };
  return fd_hessian(u, base_point(static_cast<Eigen::Index>(config.size()), sigma), opts,
                    "potential_hessian_fd");
}

}  // namespace moulton
