#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "moulton/cc_core.hpp"
#include "moulton/errors.hpp"
#include "moulton/spectral.hpp"
#include "oracles.hpp"

using namespace moulton;

namespace {

MassVector masses(std::vector<double> raw) { return normalize_masses(raw); }

// Quintic written out independently of the library, highest degree first.
long double quintic(long double m1, long double m2, long double m3, long double x) {
  return (m3 + m2) * std::pow(x, 5) + (3 * m3 + 2 * m2) * std::pow(x, 4) +
         (3 * m3 + m2) * std::pow(x, 3) - (3 * m1 + m2) * x * x - (3 * m1 + 2 * m2) * x -
         (m1 + m2);
}

long double quintic_root_oracle(double m1, double m2, double m3) {
  return oracle::bisect([&](long double x) { return quintic(m1, m2, m3, x); }, 1e-6L, 1e6L, 400);
}

// Residual of the CC equations in the form sum_j m_j (a_j - a_i)/|a_j - a_i|^3 + mu a_i.
double cc_equation_residual(const std::vector<double>& m, const std::vector<double>& a,
                            double mu) {
  double worst = 0.0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    double s = mu * a[i];
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (j != i) s += m[j] * (a[j] - a[i]) / std::pow(std::abs(a[j] - a[i]), 3);
    }
    worst = std::max(worst, std::abs(s));
  }
  return worst;
}

}  // namespace

TEST_CASE("normalize_masses scales to unit total and rejects bad input") {
  const MassVector m = masses({2, 1, 1});
  CHECK(m[0] == 0.5);
  CHECK(m[1] == 0.25);
  CHECK(m[2] == 0.25);

  const MassVector em = masses({5.97237e24, 7.342e22});
  CHECK(em[0] == doctest::Approx(0.9879).epsilon(1e-4));
  CHECK(em[1] == doctest::Approx(0.0121).epsilon(1e-2));

  CHECK_THROWS_AS(masses({1, 0, 1}), Error);
  CHECK_THROWS_AS(masses({1, -1, 1}), Error);
  CHECK_THROWS_AS(masses({1}), Error);
  try {
    masses({1, 0, 1});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonPositiveMass);
  }
  try {
    masses({1});
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::TooFewBodies);
  }
}

TEST_CASE("from_normalized keeps values bitwise") {
  const MassVector m = masses({0.3, 0.7, 1.1});
  const std::vector<double> raw(m.values().begin(), m.values().end());
  CHECK(MassVector::from_normalized(raw) == m);
  CHECK_THROWS_AS(MassVector::from_normalized({0.5, 0.6}), Error);
}

TEST_CASE("euler_quintic_root") {
  CHECK(euler_quintic_root(1.0 / 3, 1.0 / 3, 1.0 / 3) == doctest::Approx(1.0).epsilon(1e-14));

  for (auto [m1, m2, m3] : {std::tuple{0.9879, 0.0, 0.0121}, std::tuple{0.5, 0.3, 0.2},
                            std::tuple{0.1, 0.8, 0.1}, std::tuple{0.01, 0.01, 0.98}}) {
    const long double ref = quintic_root_oracle(m1, m2, m3);
    const double x = euler_quintic_root(m1, m2, m3);
    CHECK(std::abs(x - static_cast<double>(ref)) <= 1e-13 * std::max(1.0L, ref));

    // Residual relative to the size of the terms: at x ~ 5.6 the terms are
    // ~1e3 and an absolute 1e-13 is below binary64 resolution.
    const long double lx = x;
    const long double scale = (m3 + m2) * std::pow(lx, 5) + (3 * m3 + 2 * m2) * std::pow(lx, 4) +
                              (3 * m3 + m2) * std::pow(lx, 3) + (3 * m1 + m2) * lx * lx +
                              (3 * m1 + 2 * m2) * lx + (m1 + m2);
    CHECK(std::abs(quintic(m1, m2, m3, lx)) / scale <= 1e-15L);
    CHECK(std::abs(euler_quintic(m1, m2, m3, x)) / static_cast<double>(scale) <= 1e-14);
  }

  CHECK(euler_quintic_root(0.9879, 0.0, 0.0121) == doctest::Approx(0.8493 / (1 - 0.8493)).epsilon(1e-3));
}

TEST_CASE("euler_quintic_root is monotone in m1/m3") {
  double previous = 0.0;
  for (double r = 0.05; r < 20.0; r *= 1.3) {
    const double m3 = 0.6 / (1.0 + r);
    const double x = euler_quintic_root(r * m3, 0.4, m3);
    CHECK(x > previous);
    previous = x;
  }
}

TEST_CASE("solve_collinear_cc closed-form cases") {
  const CollinearConfig two = solve_collinear_cc(masses({1, 1}));
  CHECK(two.positions[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(two.positions[1] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(two.mu == doctest::Approx(0.125).epsilon(1e-14));

  const CollinearConfig three = solve_collinear_cc(masses({1, 1, 1}));
  const double c = std::sqrt(1.5);
  CHECK(three.positions[0] == doctest::Approx(-c).epsilon(1e-12));
  CHECK(std::abs(three.positions[1]) <= 1e-12);
  CHECK(three.positions[2] == doctest::Approx(c).epsilon(1e-12));
  CHECK(three.mu == doctest::Approx((2.0 / c + 1.0 / (2.0 * c)) / 9.0).epsilon(1e-12));
  CHECK(potential_mu(three) == doctest::Approx(three.mu).epsilon(1e-14));
}

TEST_CASE("solve_collinear_cc n=4 against a grid-seeded Newton oracle") {
  // Oracle: fix mu = 1 (unnormalized scale), grid search for a seed with
  // ordered positions, Newton on the n-1 CC equations plus centre of mass,
  // then rescale to unit inertia. mu scales as s^{-3}.
  const std::vector<double> m{0.4, 0.3, 0.2, 0.1};
  auto residual = [&](const Eigen::Vector4d& a) {
    Eigen::Vector4d f;
    for (int i = 0; i < 3; ++i) {
      double s = a[i];
      for (int j = 0; j < 4; ++j) {
        if (j != i) s += m[j] * (a[j] - a[i]) / std::pow(std::abs(a[j] - a[i]), 3);
      }
      f[i] = s;
    }
    f[3] = m[0] * a[0] + m[1] * a[1] + m[2] * a[2] + m[3] * a[3];
    return f;
  };
  Eigen::Vector4d best;
  double best_norm = 1e300;
  for (double g1 = 0.2; g1 < 2.0; g1 += 0.1) {
    for (double g2 = 0.2; g2 < 2.0; g2 += 0.1) {
      for (double g3 = 0.2; g3 < 2.0; g3 += 0.1) {
        Eigen::Vector4d a(0.0, g1, g1 + g2, g1 + g2 + g3);
        a.array() -= (m[0] * a[0] + m[1] * a[1] + m[2] * a[2] + m[3] * a[3]);
        const double r = residual(a).norm();
        if (r < best_norm) {
          best_norm = r;
          best = a;
        }
      }
    }
  }
  Eigen::Vector4d a = best;
  for (int it = 0; it < 100; ++it) {
    Eigen::Matrix4d jac;
    const double h = 1e-7;
    const Eigen::Vector4d f0 = residual(a);
    for (int k = 0; k < 4; ++k) {
      Eigen::Vector4d ap = a, am = a;
      ap[k] += h;
      am[k] -= h;
      jac.col(k) = (residual(ap) - residual(am)) / (2 * h);
    }
    const Eigen::Vector4d step = jac.partialPivLu().solve(-f0);
    double t = 1.0;
    while (residual(a + t * step).norm() > f0.norm() && t > 1e-6) t *= 0.5;
    a += t * step;
    if (residual(a).norm() < 1e-15) break;
  }
  REQUIRE(residual(a).norm() <= 1e-10);
  double inertia = 0.0;
  for (int i = 0; i < 4; ++i) inertia += m[i] * a[i] * a[i];
  const double s = std::sqrt(inertia);
  const CollinearConfig cfg = solve_collinear_cc(masses(m));
  for (int i = 0; i < 4; ++i) CHECK(cfg.positions[i] == doctest::Approx(a[i] / s).epsilon(1e-9));
  CHECK(cfg.mu == doctest::Approx(std::pow(s, 3)).epsilon(1e-9));
}

TEST_CASE("random configurations satisfy the invariants") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> pick_n(2, 8);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> raw(static_cast<std::size_t>(pick_n(rng)));
    for (double& x : raw) x = u(rng);
    const MassVector mv = masses(raw);
    const CollinearConfig cfg = solve_collinear_cc(mv);
    const std::vector<double> m(mv.values().begin(), mv.values().end());
    std::vector<double> a(cfg.positions.data(), cfg.positions.data() + cfg.positions.size());
    double com = 0.0, inertia = 0.0, total = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      com += m[i] * a[i];
      inertia += m[i] * a[i] * a[i];
      total += m[i];
      if (i > 0) CHECK(a[i] > a[i - 1]);
    }
    CHECK(std::abs(total - 1.0) <= 1e-14);
    CHECK(std::abs(com) <= 1e-12);
    CHECK(std::abs(inertia - 1.0) <= 1e-12);
    CHECK(cc_equation_residual(m, a, cfg.mu) <= 1e-10);
    CHECK(cc_residual(cfg) <= 1e-10);
    double u_direct = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i)
      for (std::size_t j = i + 1; j < m.size(); ++j) u_direct += m[i] * m[j] / std::abs(a[i] - a[j]);
    CHECK(cfg.mu == doctest::Approx(u_direct).epsilon(1e-12));
  }
}

TEST_CASE("reversed masses give the mirrored configuration") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int n = 3; n <= 7; ++n) {
    std::vector<double> raw(static_cast<std::size_t>(n));
    for (double& x : raw) x = u(rng);
    std::vector<double> rev(raw.rbegin(), raw.rend());
    const CollinearConfig a = solve_collinear_cc(masses(raw));
    const CollinearConfig b = solve_collinear_cc(masses(rev));
    for (int i = 0; i < n; ++i) CHECK(std::abs(a.positions[i] + b.positions[n - 1 - i]) <= 1e-12);
  }
}

TEST_CASE("solve_collinear_cc is deterministic") {
  const MassVector m = masses({0.2, 0.5, 0.1, 0.7, 0.3});
  const CollinearConfig a = solve_collinear_cc(m);
  const CollinearConfig b = solve_collinear_cc(m);
  CHECK(a.positions == b.positions);
  CHECK(a.mu == b.mu);
}

TEST_CASE("beta_three_body") {
  CHECK(beta_three_body(masses({1, 1, 1})) == doctest::Approx(1.4).epsilon(1e-12));
  CHECK_THROWS_AS(beta_three_body(masses({1, 1})), Error);
  CHECK_THROWS_AS(beta_three_body(masses({1, 1, 1, 1})), Error);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  for (int t = 0; t < 50; ++t) {
    const MassVector m = masses({u(rng), u(rng), u(rng)});
    const double spectral = spectrum_and_betas(solve_collinear_cc(m)).betas.at(0);
    CHECK(std::abs(beta_three_body(m) - spectral) <= 1e-10);
  }
}

TEST_CASE("three-body configuration ratio equals the quintic root") {
  const MassVector m = masses({0.5, 0.3, 0.2});
  const CollinearConfig cfg = solve_collinear_cc(m);
  const double ratio =
      (cfg.positions[1] - cfg.positions[0]) / (cfg.positions[2] - cfg.positions[1]);
  CHECK(ratio == doctest::Approx(static_cast<double>(quintic_root_oracle(0.5, 0.3, 0.2))).epsilon(1e-10));
}
