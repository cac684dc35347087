#include "moulton/fourbody.hpp"

#include <array>
#include <cmath>
#include <string>

#include "moulton/spectral.hpp"

namespace moulton {

namespace {

using ld = long double;

// Earth-Moon data for the station example.
constexpr double kEarthMass = 5.97237e24;
constexpr double kMoonMass = 7.342e22;
constexpr double kEarthMoonKm = 384405.0;
constexpr double kMoonEccentricity = 0.0549;

constexpr ld kStartEps = 1e-3L;
constexpr int kNewtonIterations = 60;
constexpr ld kNewtonTol = 1e-15L;

void check_params(double m, double tau, const char* op) {
  if (!(m > 0.0 && m < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, op, "m must lie in (0, 1)");
  }
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw Error(ErrorKind::InvalidArgument, op, "tau must be positive");
  }
}

template <typename T>
std::array<T, 2> gh(T m, T tau, T eps, T x, T y) {
  const T s = 1 + tau - x - tau * y;
  const T m4 = 1 - m - (1 + tau) * eps;
  const T l1 = eps / (x * x) + tau * eps / (y * y) + m4;
  const T l2 = -m / (x * x) + tau * eps / ((y - x) * (y - x)) + m4 / ((1 - x) * (1 - x));
  const T l3 = -m / (y * y) - eps / ((y - x) * (y - x)) + m4 / ((1 - y) * (1 - y));
  const T r1 = 1 - m - s * eps;
  const T r2 = 1 - m - x - s * eps;
  const T r3 = 1 - m - y - s * eps;
  return {l1 * r2 - l2 * r1, l1 * r3 - l3 * r1};
}

struct Scaled {
  ld m, tau, eps, root;  // root = eps^{1/3}

  std::pair<ld, ld> xy(ld s, ld d) const { return {s - 0.5L * d * root, s + 0.5L * d * root}; }

  Eigen::Matrix<ld, 2, 1> residual(ld s, ld d) const {
    const auto [x, y] = xy(s, d);
    const auto v = gh<ld>(m, tau, eps, x, y);
    Eigen::Matrix<ld, 2, 1> f;
    f << v[0] + tau * v[1], (v[0] - v[1]) / root;
    return f;
  }

  bool feasible(ld s, ld d) const {
    const auto [x, y] = xy(s, d);
    return x > 0 && x < y && y < 1 && std::isfinite(static_cast<double>(x + y));
  }
};

// Newton in (s, d) with a central-difference Jacobian and step halving.
bool newton_scaled(const Scaled& p, ld& s, ld& d) {
  if (!p.feasible(s, d)) return false;
  Eigen::Matrix<ld, 2, 1> f = p.residual(s, d);
  for (int it = 0; it < kNewtonIterations; ++it) {
    if (f.cwiseAbs().maxCoeff() <= kNewtonTol) return true;
    Eigen::Matrix<ld, 2, 2> jac;
    const ld hs = 1e-9L * std::max<ld>(1, std::abs(s));
    const ld hd = 1e-9L * std::max<ld>(1, std::abs(d));
    jac.col(0) = (p.residual(s + hs, d) - p.residual(s - hs, d)) / (2 * hs);
    jac.col(1) = (p.residual(s, d + hd) - p.residual(s, d - hd)) / (2 * hd);
    const Eigen::Matrix<ld, 2, 1> step = jac.partialPivLu().solve(-f);
    if (!std::isfinite(static_cast<double>(step[0])) || !std::isfinite(static_cast<double>(step[1])))
      return false;
    ld t = 1;
    bool moved = false;
    for (int h = 0; h < 30; ++h, t *= 0.5L) {
      const ld sn = s + t * step[0], dn = d + t * step[1];
      if (!p.feasible(sn, dn)) continue;
      const auto fn = p.residual(sn, dn);
      if (fn.cwiseAbs().maxCoeff() < f.cwiseAbs().maxCoeff()) {
        s = sn;
        d = dn;
        f = fn;
        moved = true;
        break;
      }
    }
    if (!moved) return f.cwiseAbs().maxCoeff() <= 1e3L * kNewtonTol;
  }
  return f.cwiseAbs().maxCoeff() <= 1e3L * kNewtonTol;
}

ld x0_poly(ld m, ld x) {
  return ((((x - (3 - m)) * x + (3 - 2 * m)) * x - m) * x + 2 * m) * x - m;
}

// Body positions in units of alpha, before centring.
std::array<ld, 4> unit_positions(const FourBodyFamily& f) {
  return {0.0L, static_cast<ld>(f.x), static_cast<ld>(f.y), 1.0L};
}

std::array<ld, 4> masses_of(const FourBodyFamily& f) {
  const ld eps = f.eps;
  return {static_cast<ld>(f.m), eps, static_cast<ld>(f.tau) * eps,
          1 - static_cast<ld>(f.m) - (1 + static_cast<ld>(f.tau)) * eps};
}

}  // namespace

double x0_polynomial(double m, double x0) { return static_cast<double>(x0_poly(m, x0)); }

double solve_x0(double m) {
  if (!(m > 0.0 && m < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "solve_x0", "m must lie in (0, 1)");
  }
  // Negative at 0 and equal to 1 - m at 1.
  ld lo = 0, hi = 1, x = 0.5L;
  for (int it = 0; it < 200; ++it) {
    const ld p = x0_poly(m, x);
    if (p == 0) break;
    if (p < 0) lo = x; else hi = x;
    const ld dp = ((((5 * x - 4 * (3 - m)) * x + 3 * (3 - 2 * static_cast<ld>(m))) * x - 2 * m) * x) +
                  2 * m;
    ld next = x - p / dp;
    if (!(next > lo && next < hi)) next = 0.5L * (lo + hi);
    if (std::abs(next - x) <= 4 * std::numeric_limits<ld>::epsilon()) {
      x = next;
      break;
    }
    x = next;
  }
  return static_cast<double>(x);
}

Eigen::Vector2d family_equations(double m, double tau, double eps, double x, double y) {
  const auto v = gh<ld>(m, tau, eps, x, y);
  return {static_cast<double>(v[0]), static_cast<double>(v[1])};
}

double inverse_alpha_squared(double m, double tau, double eps, double x, double y) {
  const ld s = 1 + static_cast<ld>(tau) - x - static_cast<ld>(tau) * y;
  const ld e = eps;
  const ld mm = m;
  const ld lin = (1 - static_cast<ld>(x)) * (1 - static_cast<ld>(x)) +
                 static_cast<ld>(tau) * (1 - static_cast<ld>(y)) * (1 - static_cast<ld>(y)) -
                 2 * mm * s;
  return static_cast<double>(mm * (1 - mm) + lin * e - s * s * e * e);
}

FourBodyFamily solve_family(double m, double tau, double eps) {
  check_params(m, tau, "solve_family");
  const double eps_max = (1.0 - m) / (tau + 1.0);
  if (!(eps >= 1e-12 && eps < eps_max)) {
    throw Error(ErrorKind::InvalidArgument, "solve_family",
                "eps must lie in [1e-12, " + std::to_string(eps_max) + ")");
  }

  const FourBodyLimit lim = limit_quantities(m, tau);
  ld s = lim.x0;
  ld d = std::cbrt((1 + static_cast<ld>(tau)) / (2 * static_cast<ld>(lim.beta) + 3));

  auto make = [&](ld e) { return Scaled{m, tau, e, std::cbrt(e)}; };

  // Seed at a moderate eps, then walk in log(eps) towards the target.
  ld current = std::min<ld>(kStartEps, 0.5L * static_cast<ld>(eps_max));
  if (!newton_scaled(make(current), s, d)) {
    throw Error(ErrorKind::ContinuationFailure, "solve_family",
                "no convergence at the starting eps " + std::to_string(static_cast<double>(current)));
  }
  const ld target = eps;
  ld log_step = std::log(10.0L) / 2;
  while (current != target) {
    const ld dir = target < current ? -1 : 1;
    ld next = current * std::exp(dir * log_step);
    if ((dir < 0 && next < target) || (dir > 0 && next > target)) next = target;
    ld sn = s, dn = d;
    const Scaled p = make(next);
    if (newton_scaled(p, sn, dn)) {
      s = sn;
      d = dn;
      current = next;
      log_step = std::min<ld>(log_step * 1.5L, std::log(10.0L));
    } else {
      log_step *= 0.5L;
      if (log_step < 1e-4L) {
        throw Error(ErrorKind::ContinuationFailure, "solve_family",
                    "step collapsed near eps " + std::to_string(static_cast<double>(current)));
      }
    }
  }

  const Scaled p = make(target);
  const auto [x, y] = p.xy(s, d);
  FourBodyFamily f;
  f.m = m;
  f.tau = tau;
  f.eps = eps;
  f.x = static_cast<double>(x);
  f.y = static_cast<double>(y);
  f.alpha = 1.0 / std::sqrt(inverse_alpha_squared(m, tau, eps, f.x, f.y));

  const CollinearConfig cfg = family_config(f);
  f.mu = cfg.mu;

  const Eigen::Matrix4d dm = build_D_eps(f);
  double off = 0.0, cross = 0.0, rows = 0.0;
  for (int i = 0; i < 4; ++i) {
    double row = 0.0;
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      off += dm(i, j);
      row += dm(i, j);
      if (i < j) cross += dm(i, j) * dm(j, i);
    }
    rows += row * row;
  }
  f.delta = off / (2.0 * f.mu);
  const double big_delta =
      f.mu * f.mu * (-4.0 * f.delta * f.delta + 4.0 * f.delta - 3.0) + 2.0 * rows + 4.0 * cross;
  f.delta_tilde = big_delta / (4.0 * f.mu * f.mu);
  const double root = std::sqrt(std::max(0.0, f.delta_tilde));
  f.beta1 = f.delta - 1.5 - root;
  f.beta2 = f.delta - 1.5 + root;
  return f;
}

MassVector family_masses(const FourBodyFamily& f) {
  const auto ms = masses_of(f);
  const std::array<double, 4> raw{static_cast<double>(ms[0]), static_cast<double>(ms[1]),
                                  static_cast<double>(ms[2]), static_cast<double>(ms[3])};
  return normalize_masses(raw);
}

CollinearConfig family_config(const FourBodyFamily& f) {
  const ld s = 1 + static_cast<ld>(f.tau) - f.x - static_cast<ld>(f.tau) * f.y;
  const ld shift = static_cast<ld>(f.m) - 1 + s * static_cast<ld>(f.eps);
  const auto u = unit_positions(f);
  Eigen::VectorXd a(4);
  for (int i = 0; i < 4; ++i) a[i] = static_cast<double>((u[i] + shift) * static_cast<ld>(f.alpha));
  CollinearConfig cfg{family_masses(f), a, 0.0};
  cfg.mu = potential_mu(cfg);
  return cfg;
}

Eigen::Matrix4d build_D_eps(const FourBodyFamily& f) {
  const auto ms = masses_of(f);
  const auto u = unit_positions(f);
  const ld a3 = std::pow(static_cast<ld>(f.alpha), 3);
  Eigen::Matrix4d dm;
  for (int i = 0; i < 4; ++i) {
    ld row = 0;
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const ld v = ms[j] / (std::pow(std::abs(u[i] - u[j]), 3) * a3);
      dm(i, j) = static_cast<double>(v);
      row += v;
    }
    dm(i, i) = static_cast<double>(static_cast<ld>(f.mu) - row);
  }
  return dm;
}

FourBodyLimit limit_quantities(double m, double tau) {
  check_params(m, tau, "limit_quantities");
  FourBodyLimit lim;
  lim.m = m;
  lim.tau = tau;
  lim.x0 = solve_x0(m);
  lim.alpha0 = 1.0 / std::sqrt(m * (1.0 - m));
  lim.mu0 = std::pow(lim.alpha0, -3);
  lim.beta = -1.0 + m / std::pow(lim.x0, 3) + (1.0 - m) / std::pow(1.0 - lim.x0, 3);
  lim.beta1_0 = lim.beta;
  lim.beta2_0 = 3.0 * (lim.beta + 1.0);
  return lim;
}

Eigen::Matrix4d limit_D0(const FourBodyLimit& lim) {
  const double m = lim.m, t = lim.tau, b = lim.beta, mu0 = lim.mu0, x0 = lim.x0;
  const double k = (2.0 * b + 3.0) / (1.0 + t);
  const double near = m / std::pow(x0, 3);
  const double far = (1.0 - m) / std::pow(1.0 - x0, 3);
  Eigen::Matrix4d d0;
  d0 << m, 0, 0, 1.0 - m,
        near, -b - t * k, t * k, far,
        near, k, -b - k, far,
        m, 0, 0, 1.0 - m;
  return mu0 * d0;
}

double xia_potential(double m, const Eigen::Vector2d& q) {
  const double alpha0 = 1.0 / std::sqrt(m * (1.0 - m));
  const Eigen::Vector2d a1(-(1.0 - m) * alpha0, 0.0);
  const Eigen::Vector2d a4(m * alpha0, 0.0);
  return m / (a1 - q).norm() + (1.0 - m) / (a4 - q).norm() +
         0.5 * std::pow(alpha0, -3) * q.squaredNorm();
}

Eigen::Matrix2d xia_hessian_check(double m) {
  const FourBodyLimit lim = limit_quantities(m, 1.0);
  const double alpha0 = lim.alpha0;
  const double a1 = -(1.0 - m) * alpha0;
  const double a4 = m * alpha0;
  const double qx = (m + lim.x0 - 1.0) * alpha0;
  const double qy = 0.0;
  const double r1 = std::hypot(a1 - qx, qy);
  const double r4 = std::hypot(a4 - qx, qy);
  const double base = -m / std::pow(r1, 3) - (1.0 - m) / std::pow(r4, 3) + std::pow(alpha0, -3);
  Eigen::Matrix2d h;
  h(0, 0) = base + 3.0 * (m * std::pow(a1 - qx, 2) / std::pow(r1, 5) +
                          (1.0 - m) * std::pow(a4 - qx, 2) / std::pow(r4, 5));
  h(0, 1) = -3.0 * (m * (a1 - qx) * qy / std::pow(r1, 5) + (1.0 - m) * (a4 - qx) * qy / std::pow(r4, 5));
  h(1, 0) = h(0, 1);
  h(1, 1) = base + 3.0 * (m * qy * qy / std::pow(r1, 5) + (1.0 - m) * qy * qy / std::pow(r4, 5));
  return h;
}

EssmReport essm_report() {
  EssmReport r;
  r.earth_mass = kEarthMass;
  r.moon_mass = kMoonMass;
  r.distance_km = kEarthMoonKm;
  r.e = kMoonEccentricity;
  r.m = kEarthMass / (kEarthMass + kMoonMass);
  const FourBodyLimit lim = limit_quantities(r.m, 1.0);
  r.x0 = lim.x0;
  r.station_distance_km = kEarthMoonKm * (1.0 - lim.x0);
  r.beta1 = lim.beta1_0;
  r.beta2 = lim.beta2_0;
  r.resonances = resonance_betas(8);
  auto at = [&](double order) {
    for (const auto& rv : r.resonances)
      if (rv.order == order) return rv.beta;
    return 0.0;
  };
  r.beta1_interleaved = at(2.0) < r.beta1 && r.beta1 < at(2.5);
  r.beta2_interleaved = at(4.0) < r.beta2 && r.beta2 < at(4.5);
  const MonodromyResult g1 = integrate_monodromy(LinearizedBlock::essential(r.beta1, r.e));
  const MonodromyResult g2 = integrate_monodromy(LinearizedBlock::essential(r.beta2, r.e));
  r.multipliers1 = g1.multipliers;
  r.multipliers2 = g2.multipliers;
  r.pattern1 = classify(g1);
  r.pattern2 = classify(g2);

  auto round4 = [](double v) { return std::round(v * 1e4) / 1e4; };
  r.rounded.m = round4(r.m);
  r.rounded.x0 = round4(solve_x0(r.rounded.m));
  r.rounded.station_distance_km = kEarthMoonKm * (1.0 - r.rounded.x0);
  r.rounded.beta1 = -1.0 + r.rounded.m / std::pow(r.rounded.x0, 3) +
                    (1.0 - r.rounded.m) / std::pow(1.0 - r.rounded.x0, 3);
  r.rounded.beta2 = 3.0 * (r.rounded.beta1 + 1.0);
  return r;
}

}  // namespace moulton
