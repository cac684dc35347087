#pragma once

#include <vector>

#include <Eigen/Dense>

#include "moulton/cc_core.hpp"
#include "moulton/monodromy.hpp"

namespace moulton {

/// Collinear four-body configuration with masses (m, eps, tau eps, rest),
/// bodies at 0, x alpha, y alpha, alpha before centring.
struct FourBodyFamily {
  double m = 0.0;
  double tau = 0.0;
  double eps = 0.0;
  double x = 0.0;
  double y = 0.0;
  double alpha = 0.0;
  double mu = 0.0;
  double delta = 0.0;
  double delta_tilde = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

/// eps -> 0 limit: the two small bodies merge at the Euler point x0 of the
/// restricted problem with masses (m, 0, 1 - m).
struct FourBodyLimit {
  double m = 0.0;
  double tau = 0.0;
  double x0 = 0.0;
  double alpha0 = 0.0;
  double mu0 = 0.0;
  double beta = 0.0;
  double beta1_0 = 0.0;
  double beta2_0 = 0.0;
};

/// Left-hand side of the restricted-problem quintic for x0 in (0, 1).
double x0_polynomial(double m, double x0);

/// Root of x0_polynomial in (0, 1).
double solve_x0(double m);

/// The two collinearity conditions (g, h) for the family; both vanish at a
/// central configuration.
Eigen::Vector2d family_equations(double m, double tau, double eps, double x, double y);

/// 1/alpha^2 as a polynomial in eps, from the inertia normalization.
double inverse_alpha_squared(double m, double tau, double eps, double x, double y);

FourBodyFamily solve_family(double m, double tau, double eps);

MassVector family_masses(const FourBodyFamily& family);
CollinearConfig family_config(const FourBodyFamily& family);

/// D = mu I + M^{-1} B written out entrywise for the family.
Eigen::Matrix4d build_D_eps(const FourBodyFamily& family);

FourBodyLimit limit_quantities(double m, double tau);

/// Limit of D as eps -> 0.
Eigen::Matrix4d limit_D0(const FourBodyLimit& limit);

/// V_2(q) = m/|a_1 - q| + (1-m)/|a_4 - q| + |q|^2 / (2 alpha0^3), centre-of-mass frame.
double xia_potential(double m, const Eigen::Vector2d& q);

/// Hessian of V_2 at the limit position of the small bodies, from the
/// explicit second derivatives.
Eigen::Matrix2d xia_hessian_check(double m);

/// The example evaluated with m and x0 rounded to four decimals before use,
/// which is how the commonly quoted figures for it were produced.
struct EssmRounded {
  double m = 0.0;
  double x0 = 0.0;
  double station_distance_km = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
};

struct EssmReport {
  double earth_mass = 0.0;
  double moon_mass = 0.0;
  double distance_km = 0.0;
  double e = 0.0;
  double m = 0.0;
  double x0 = 0.0;
  double station_distance_km = 0.0;
  double beta1 = 0.0;
  double beta2 = 0.0;
  std::vector<ResonanceValue> resonances;
  bool beta1_interleaved = false;
  bool beta2_interleaved = false;
  StabilityPattern pattern1;
  StabilityPattern pattern2;
  std::vector<std::complex<double>> multipliers1;
  std::vector<std::complex<double>> multipliers2;
  EssmRounded rounded;

  std::string pattern_code() const { return pattern1.code() + pattern2.code(); }
};

EssmReport essm_report();

}  // namespace moulton
