#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "moulton/errors.hpp"

namespace moulton {

/// Positive masses normalized to unit total. Only constructible through
/// normalize_masses, so every instance satisfies the invariants.
class MassVector {
 public:
  std::size_t size() const noexcept { return m_.size(); }
  double operator[](std::size_t i) const { return m_[i]; }
  std::span<const double> values() const noexcept { return m_; }
  Eigen::VectorXd as_eigen() const;

  /// Accepts masses that are already normalized (positive, sum within
  /// 1e-14 of one) without rescaling, so stored values survive bitwise.
  static MassVector from_normalized(std::vector<double> m);

  bool operator==(const MassVector&) const = default;

 private:
  friend MassVector normalize_masses(std::span<const double> raw);
  explicit MassVector(std::vector<double> m) : m_(std::move(m)) {}
  std::vector<double> m_;
};

/// Ordered collinear central configuration with
/// sum m_i a_i = 0, sum m_i a_i^2 = 1, and mu = U(a).
struct CollinearConfig {
  MassVector masses;
  Eigen::VectorXd positions;
  double mu = 0.0;

  std::size_t size() const noexcept { return masses.size(); }
};

MassVector normalize_masses(std::span<const double> raw);

/// Unique positive root of Euler's quintic for the ordered masses
/// (m1, m2, m3). The root is the ratio |q1 q2| / |q2 q3|. m2 = 0 is the
/// restricted problem.
double euler_quintic_root(double m1, double m2, double m3);

/// Value of Euler's quintic polynomial, used by tests and the bisection
/// fallback.
double euler_quintic(double m1, double m2, double m3, double x);

/// Newton solve of the collinear central configuration equations
///   sum_{j != i} m_j (a_j - a_i) / |a_j - a_i|^3 + mu a_i = 0
/// together with the centre-of-mass and inertia normalizations.
CollinearConfig solve_collinear_cc(const MassVector& masses);

/// Largest per-body residual of the central-configuration equations.
double cc_residual(const CollinearConfig& config);

double potential_mu(const CollinearConfig& config);

/// Mass parameter of the 3-body Euler solution, evaluated at the quintic root.
double beta_three_body(const MassVector& masses);

}  // namespace moulton
