#include "moulton/cc_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace moulton {

namespace {

constexpr double kResidualTarget = 1e-12;
constexpr double kResidualAccept = 1e-10;
constexpr int kMaxNewtonIterations = 200;
constexpr int kMaxHalvings = 40;

// Coefficients of Euler's quintic, lowest degree first.
template <typename T>
std::array<T, 6> quintic_coefficients(T m1, T m2, T m3) {
  return {-(m1 + m2), -(3 * m1 + 2 * m2), -(3 * m1 + m2),
          3 * m3 + m2, 3 * m3 + 2 * m2,  m3 + m2};
}

template <typename T>
std::pair<T, T> horner_with_derivative(const std::array<T, 6>& c, T x) {
  T p = c[5];
  T dp = 0;
  for (int i = 4; i >= 0; --i) {
    dp = dp * x + p;
    p = p * x + c[i];
  }
  return {p, dp};
}

bool strictly_increasing(const Eigen::VectorXd& a) {
  for (Eigen::Index i = 1; i < a.size(); ++i) {
    if (!(a[i] > a[i - 1])) return false;
  }
  return true;
}

// Residuals of the square system: n-1 central-configuration equations
// (the last one follows from the others and the centre of mass), the
// centre-of-mass condition and the inertia normalization.
Eigen::VectorXd cc_system(const Eigen::VectorXd& m, const Eigen::VectorXd& v) {
  const Eigen::Index n = m.size();
  Eigen::VectorXd f(n + 1);
  const double mu = v[n];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double d = v[j] - v[i];
      s += m[j] * d / std::pow(std::abs(d), 3);
    }
    f[i] = s + mu * v[i];
  }
  f[n - 1] = m.dot(v.head(n));
  f[n] = m.dot(v.head(n).cwiseAbs2()) - 1.0;
  return f;
}

Eigen::MatrixXd cc_jacobian(const Eigen::VectorXd& m, const Eigen::VectorXd& v) {
  const Eigen::Index n = m.size();
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n + 1, n + 1);
  const double mu = v[n];
  for (Eigen::Index i = 0; i + 1 < n; ++i) {
    double diag = mu;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      const double c = 2.0 * m[j] / std::pow(std::abs(v[j] - v[i]), 3);
      jac(i, j) = -c;
      diag += c;
    }
    jac(i, i) = diag;
    jac(i, n) = v[i];
  }
  for (Eigen::Index j = 0; j < n; ++j) {
    jac(n - 1, j) = m[j];
    jac(n, j) = 2.0 * m[j] * v[j];
  }
  return jac;
}

double pair_potential(const Eigen::VectorXd& m, const Eigen::VectorXd& a) {
  double u = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i)
    for (Eigen::Index j = i + 1; j < a.size(); ++j)
      u += m[i] * m[j] / std::abs(a[i] - a[j]);
  return u;
}

struct NewtonOutcome {
  Eigen::VectorXd v;
  double residual;
};

NewtonOutcome damped_newton(const Eigen::VectorXd& m, Eigen::VectorXd v) {
  const Eigen::Index n = m.size();
  Eigen::VectorXd f = cc_system(m, v);
  double res = f.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < kMaxNewtonIterations && res > kResidualTarget; ++it) {
    const Eigen::VectorXd step = cc_jacobian(m, v).partialPivLu().solve(-f);
    if (!step.allFinite()) break;
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
      Eigen::VectorXd trial = v + t * step;
      if (!strictly_increasing(trial.head(n))) continue;
      const Eigen::VectorXd ft = cc_system(m, trial);
      const double rt = ft.lpNorm<Eigen::Infinity>();
      if (std::isfinite(rt) && (rt < res || h + 1 == kMaxHalvings)) {
        v = std::move(trial);
        f = ft;
        res = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return {std::move(v), res};
}

Eigen::VectorXd initial_guess(const Eigen::VectorXd& m) {
  const Eigen::Index n = m.size();
  Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  a.array() -= m.dot(a);
  a /= std::sqrt(m.dot(a.cwiseAbs2()));
  Eigen::VectorXd v(n + 1);
  v.head(n) = a;
  v[n] = pair_potential(m, a);
  return v;
}

}  // namespace

Eigen::VectorXd MassVector::as_eigen() const {
  return Eigen::Map<const Eigen::VectorXd>(m_.data(), static_cast<Eigen::Index>(m_.size()));
}

MassVector normalize_masses(std::span<const double> raw) {
  if (raw.size() < 2) {
    throw Error(ErrorKind::TooFewBodies, "normalize_masses",
                "need at least 2 masses, got " + std::to_string(raw.size()));
  }
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!(raw[i] > 0.0) || !std::isfinite(raw[i])) {
      throw Error(ErrorKind::NonPositiveMass, "normalize_masses",
                  "mass " + std::to_string(i + 1) + " is not a positive finite number");
    }
  }
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  std::vector<double> m(raw.begin(), raw.end());
  for (double& x : m) x /= total;
  return MassVector(std::move(m));
}

MassVector MassVector::from_normalized(std::vector<double> m) {
  if (m.size() < 2) {
    throw Error(ErrorKind::TooFewBodies, "MassVector::from_normalized",
                "need at least 2 masses, got " + std::to_string(m.size()));
  }
  for (double x : m) {
    if (!(x > 0.0) || !std::isfinite(x)) {
      throw Error(ErrorKind::NonPositiveMass, "MassVector::from_normalized",
                  "masses must be positive and finite");
    }
  }
  const double total = std::accumulate(m.begin(), m.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-14) {
    throw Error(ErrorKind::InvalidArgument, "MassVector::from_normalized",
                "masses sum to " + std::to_string(total));
  }
  return MassVector(std::move(m));
}

double euler_quintic(double m1, double m2, double m3, double x) {
  return horner_with_derivative(quintic_coefficients(m1, m2, m3), x).first;
}

double euler_quintic_root(double m1, double m2, double m3) {
  if (!(m1 > 0.0) || !(m3 > 0.0) || !(m2 >= 0.0)) {
    throw Error(ErrorKind::NonPositiveMass, "euler_quintic_root",
                "require m1 > 0, m2 >= 0, m3 > 0");
  }
  // The polynomial is negative at 0 and its coefficients change sign once,
  // so there is exactly one positive root. Work in extended precision: for
  // unbalanced masses the monomials near the root are O(1e3) and cancel.
  using ld = long double;
  const auto c = quintic_coefficients<ld>(m1, m2, m3);
  ld lo = 0.0L;
  ld hi = 1.0L;
  while (horner_with_derivative(c, hi).first < 0.0L) hi *= 2.0L;
  ld x = 0.5L * (lo + hi);
  for (int it = 0; it < 400; ++it) {
    const auto [p, dp] = horner_with_derivative(c, x);
    if (p == 0.0L) return static_cast<double>(x);
    if (p < 0.0L) lo = x; else hi = x;
    ld next = x - p / dp;
    if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
    if (std::abs(next - x) <= 4 * std::numeric_limits<ld>::epsilon() * x) {
      x = next;
      break;
    }
    x = next;
  }
  return static_cast<double>(x);
}

CollinearConfig solve_collinear_cc(const MassVector& masses) {
  const Eigen::VectorXd m = masses.as_eigen();
  const Eigen::Index n = m.size();

  NewtonOutcome out = damped_newton(m, initial_guess(m));

  if (!(out.residual <= kResidualAccept)) {
    // Homotopy from equal masses, where the start guess is always good.
    const Eigen::VectorXd equal = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
    Eigen::VectorXd v = damped_newton(equal, initial_guess(equal)).v;
    double t = 0.0;
    double dt = 0.125;
    while (t < 1.0 && dt > 1e-6) {
      const double tn = std::min(1.0, t + dt);
      const Eigen::VectorXd mt = (1.0 - tn) * equal + tn * m;
      NewtonOutcome step = damped_newton(mt, v);
      if (step.residual <= kResidualAccept) {
        v = std::move(step.v);
        t = tn;
        dt = std::min(0.25, dt * 2.0);
      } else {
        dt *= 0.5;
      }
    }
    out = damped_newton(m, v);
  }

  if (!(out.residual <= kResidualAccept)) {
    throw Error(ErrorKind::ConvergenceFailure, "solve_collinear_cc",
                "residual " + std::to_string(out.residual) + " after " +
                    std::to_string(kMaxNewtonIterations) + " iterations");
  }

  CollinearConfig config{masses, out.v.head(n), 0.0};
  config.mu = potential_mu(config);
  return config;
}

double cc_residual(const CollinearConfig& config) {
  const Eigen::VectorXd m = config.masses.as_eigen();
  const Eigen::VectorXd& a = config.positions;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    double s = config.mu * a[i];
    for (Eigen::Index j = 0; j < a.size(); ++j) {
      if (j == i) continue;
      const double d = a[j] - a[i];
      s += m[j] * d / std::pow(std::abs(d), 3);
    }
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

double potential_mu(const CollinearConfig& config) {
  return pair_potential(config.masses.as_eigen(), config.positions);
}

double beta_three_body(const MassVector& masses) {
  if (masses.size() != 3) {
    throw Error(ErrorKind::WrongArity, "beta_three_body",
                "expected 3 masses, got " + std::to_string(masses.size()));
  }
  const double m1 = masses[0], m2 = masses[1], m3 = masses[2];
  const double x = euler_quintic_root(m1, m2, m3);
  const double x2 = x * x;
  const double num = m1 * (3 * x2 + 3 * x + 1) + m3 * x2 * (x2 + 3 * x + 3);
  const double den = x2 + m2 * ((x + 1) * (x + 1) * (x2 + 1) - x2);
  return num / den;
}

}  // namespace moulton
