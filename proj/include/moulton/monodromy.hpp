#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "moulton/errors.hpp"

namespace moulton {

enum class BlockKind { Kepler, Essential };

struct LinearizedBlock {
  BlockKind kind = BlockKind::Kepler;
  double beta = 0.0;
  double e = 0.0;

  static LinearizedBlock kepler(double e) { return {BlockKind::Kepler, 0.0, e}; }
  static LinearizedBlock essential(double beta, double e) {
    return {BlockKind::Essential, beta, e};
  }
};

/// B(theta) = [[I, -J], [J, H(theta)]] in the block coordinates (Z, z).
Eigen::Matrix4d block_coefficient(const LinearizedBlock& block, double theta);

/// Full coefficient matrix in the ordering (Z, W_1, ..., W_{n-2}, z, w_1, ..., w_{n-2}).
Eigen::MatrixXd assemble_full_B(const std::vector<double>& betas, double e, double theta);

/// Standard symplectic matrix [[0, -I], [I, 0]] of size 2k.
Eigen::MatrixXd symplectic_J(Eigen::Index dim);

enum class Precision { Double, Extended };

struct IntegrationOptions {
  double tol = 1e-11;
  Precision precision = Precision::Double;
  int segments = 32;
};

struct MonodromyResult {
  Eigen::MatrixXd gamma;
  std::vector<std::complex<double>> multipliers;
  /// ||gamma^T J gamma - J||_inf.
  double symplectic_residual = 0.0;
  /// The same residual divided by max(1, ||gamma||_inf^2).
  double relative_symplectic_residual = 0.0;
  double det = 0.0;
};

/// Period map of one block over theta in [0, 2 pi]. tol must lie in
/// [1e-13, 1e-6]; extended precision admits tolerances down to 1e-18.
MonodromyResult integrate_monodromy(const LinearizedBlock& block, double tol = 1e-11);
MonodromyResult integrate_monodromy(const LinearizedBlock& block, const IntegrationOptions& opts);

/// Period map of the assembled 4(n-1)-dimensional system.
MonodromyResult integrate_full_monodromy(const std::vector<double>& betas, double e,
                                         const IntegrationOptions& opts = {});

/// Eigenvalues of a product of square matrices M_k ... M_1 computed by
/// periodic orthogonal iteration, without forming the product.
std::vector<std::complex<double>> product_eigenvalues(const std::vector<Eigen::MatrixXd>& factors);

enum class FactorKind { Elliptic, Hyperbolic, Degenerate, Loxodromic };

/// One normal-form factor per reciprocal multiplier pair.
///   Elliptic:   value = rotation angle in (0, pi)
///   Hyperbolic: value = the real multiplier with |value| > 1
///   Degenerate: value = +1 or -1
///   Loxodromic: value = modulus > 1, phase = argument in (0, pi)
struct StabilityFactor {
  FactorKind kind = FactorKind::Degenerate;
  double value = 0.0;
  double phase = 0.0;
};

struct StabilityPattern {
  std::vector<StabilityFactor> factors;

  /// "E", "H", "D+", "D-" and "Q" concatenated in factor order.
  std::string code() const;
};

struct ClassifyOptions {
  double pair_tol = 1e-6;
  double circle_tol = 1e-7;
  double real_tol = 1e-7;
  double degenerate_tol = 1e-4;
};

StabilityPattern classify(const std::vector<std::complex<double>>& multipliers,
                          const ClassifyOptions& opts = {});
StabilityPattern classify(const MonodromyResult& result, double tol = 1e-6);

struct ResonanceValue {
  double beta = 0.0;
  /// Frequency k/2 of the e = 0 elliptic mode; integer orders give
  /// multiplier +1, half-integer orders give -1.
  double order = 0.0;
  int multiplier_sign = 1;
};

/// Elliptic frequency of the e = 0 essential block, from the eigenvalues of JB.
double circular_frequency(double beta);

/// First `count` resonances (count <= 8) of the e = 0 essential block in
/// ascending beta, starting from order 1 at beta = 0.
std::vector<ResonanceValue> resonance_betas(int count);

struct ScanCell {
  double beta = 0.0;
  double e = 0.0;
  std::vector<std::complex<double>> multipliers;
  std::string pattern;
  bool failed = false;
  std::string error;
};

struct ScanGrid {
  std::vector<double> betas;
  std::vector<double> eccentricities;
  /// beta-major: cells[i * eccentricities.size() + j].
  std::vector<ScanCell> cells;
};

struct AxisRange {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;

  std::vector<double> samples() const;
};

struct ScanOptions {
  double tol = 1e-11;
  /// 0 means MOULTON_STAB_THREADS if set, else the hardware concurrency.
  unsigned threads = 0;
};

ScanGrid stability_scan(const AxisRange& beta_range, const AxisRange& e_range,
                        const ScanOptions& opts = {});
ScanGrid stability_scan(const std::vector<double>& betas, const std::vector<double>& eccentricities,
                        const ScanOptions& opts = {});

}  // namespace moulton
