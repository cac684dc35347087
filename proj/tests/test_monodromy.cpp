#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "moulton/errors.hpp"
#include "moulton/monodromy.hpp"
#include "oracles.hpp"

using namespace moulton;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

// Essential block coefficient matrix written out by hand.
Eigen::Matrix4d paper_block(double beta, double e, double t) {
  const double c = e * std::cos(t);
  Eigen::Matrix4d b;
  b << 1, 0, 0, 1,
       0, 1, -1, 0,
       0, -1, (-2 * beta - 2 + c) / (1 + c), 0,
       1, 0, 0, (beta + 1 + c) / (1 + c);
  return b;
}

double relative_gap(const Eigen::MatrixXd& a, const oracle::MatL& ref) {
  const oracle::MatL diff = a.cast<long double>() - ref;
  const long double scale = std::max(1.0L, ref.cwiseAbs().maxCoeff());
  return static_cast<double>(diff.cwiseAbs().maxCoeff() / scale);
}

}  // namespace

TEST_CASE("block coefficient matrices") {
  for (double t : {0.0, 1.0, 2.0}) {
    CHECK(block_coefficient(LinearizedBlock::essential(0.0, 0.4), t) ==
          block_coefficient(LinearizedBlock::kepler(0.4), t));
  }
  for (double beta : {0.0, 1.4, 4.1481, 15.4442}) {
    for (double e : {0.0, 0.3, 0.9}) {
      for (double t : {0.0, 0.7, kPi, 5.0}) {
        const Eigen::Matrix4d b = block_coefficient(LinearizedBlock::essential(beta, e), t);
        CHECK((b - paper_block(beta, e, t)).cwiseAbs().maxCoeff() <= 1e-15);
        CHECK(b == b.transpose());
        const Eigen::Matrix4d shifted =
            block_coefficient(LinearizedBlock::essential(beta, e), t + 2 * kPi);
        CHECK((b - shifted).cwiseAbs().maxCoeff() <= 1e-12);
      }
    }
    CHECK(block_coefficient(LinearizedBlock::essential(beta, 0.0), 0.0) ==
          block_coefficient(LinearizedBlock::essential(beta, 0.0), 2.5));
  }
  CHECK_THROWS_AS(block_coefficient(LinearizedBlock::essential(1.0, 1.0), 0.0), Error);
}

TEST_CASE("full coefficient matrix is a permuted direct sum") {
  const std::vector<double> betas{4.1481, 15.4442};
  const double e = 0.0549, t = 0.9;
  const Eigen::MatrixXd full = assemble_full_B(betas, e, t);
  REQUIRE(full.rows() == 12);
  CHECK(full == full.transpose());
  const Eigen::Index half = 6;
  std::vector<double> all{0.0, betas[0], betas[1]};
  for (int i = 0; i < 3; ++i) {
    const std::vector<Eigen::Index> idx{2 * i, 2 * i + 1, half + 2 * i, half + 2 * i + 1};
    Eigen::Matrix4d sub;
    for (int r = 0; r < 4; ++r)
      for (int c = 0; c < 4; ++c) sub(r, c) = full(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);
    CHECK(sub == block_coefficient(LinearizedBlock::essential(all[static_cast<std::size_t>(i)], e), t));
    for (Eigen::Index r : idx) {
      for (Eigen::Index c = 0; c < 12; ++c) {
        if (std::find(idx.begin(), idx.end(), c) == idx.end()) CHECK(full(r, c) == 0.0);
      }
    }
  }
  const Eigen::MatrixXd j = symplectic_J(4);
  CHECK(j(0, 2) == -1.0);
  CHECK(j(2, 0) == 1.0);
  CHECK((j * j + Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("circular monodromy matches the matrix exponential") {
  for (double beta : {0.0, 1.0, 4.1481, 15.4442}) {
    const oracle::MatL ref =
        oracle::expm(2.0L * std::numbers::pi_v<long double> * oracle::circular_generator(beta));
    const MonodromyResult r = integrate_monodromy(LinearizedBlock::essential(beta, 0.0));
    CHECK(relative_gap(r.gamma, ref) <= 1e-9);
  }
}

TEST_CASE("Kepler block multipliers are all one") {
  const MonodromyResult r = integrate_monodromy(LinearizedBlock::kepler(0.0));
  REQUIRE(r.multipliers.size() == 4);
  for (const cd& z : r.multipliers) CHECK(std::abs(z - 1.0) <= 1e-6);
  CHECK(std::abs(r.det - 1.0) <= 1e-8);
  CHECK(r.symplectic_residual <= 1e-8);
  CHECK(classify(r).code() == "D+D+");
  for (double e : {0.2, 0.6, 0.9}) {
    CHECK(classify(integrate_monodromy(LinearizedBlock::kepler(e))).code() == "D+D+");
  }
}

TEST_CASE("monodromy invariants over random parameters") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> ub(0.0, 20.0), ue(0.0, 0.9);
  for (int k = 0; k < 40; ++k) {
    const double beta = ub(rng), e = ue(rng);
    const MonodromyResult r = integrate_monodromy(LinearizedBlock::essential(beta, e));
    CHECK(r.relative_symplectic_residual <= 1e-8);
    REQUIRE(r.multipliers.size() == 4);
    for (const cd& z : r.multipliers) {
      double best = 1e300;
      for (const cd& w : r.multipliers) {
        if (&w != &z) best = std::min(best, std::abs(z * w - 1.0));
      }
      CHECK(best <= 1e-6);
    }
    cd prod = 1.0;
    for (const cd& z : r.multipliers) prod *= z;
    CHECK(std::abs(prod - 1.0) <= 1e-6);
  }
}

TEST_CASE("extended precision agrees with double") {
  IntegrationOptions ext;
  ext.precision = Precision::Extended;
  ext.tol = 1e-15;
  for (double beta : {1.4, 4.1481}) {
    const MonodromyResult a = integrate_monodromy(LinearizedBlock::essential(beta, 0.3));
    const MonodromyResult b = integrate_monodromy(LinearizedBlock::essential(beta, 0.3), ext);
    CHECK(oracle::multiset_distance(a.multipliers, b.multipliers) <= 1e-7);
    CHECK(b.relative_symplectic_residual <= a.relative_symplectic_residual * 10 + 1e-18);
  }
}

TEST_CASE("integration argument checks") {
  CHECK_THROWS_AS(integrate_monodromy(LinearizedBlock::essential(1.0, 0.1), 1e-14), Error);
  CHECK_THROWS_AS(integrate_monodromy(LinearizedBlock::essential(1.0, 0.1), 1e-5), Error);
  CHECK_THROWS_AS(integrate_monodromy(LinearizedBlock::essential(1.0, 1.0)), Error);
  IntegrationOptions ext;
  ext.precision = Precision::Extended;
  ext.tol = 1e-17;
  CHECK_NOTHROW(integrate_monodromy(LinearizedBlock::essential(1.0, 0.1), ext));
  const MonodromyResult a = integrate_monodromy(LinearizedBlock::essential(2.0, 0.4));
  const MonodromyResult b = integrate_monodromy(LinearizedBlock::essential(2.0, 0.4));
  CHECK(a.gamma == b.gamma);
  CHECK(a.multipliers == b.multipliers);
}

TEST_CASE("periodic eigenvalues of graded products") {
  // F_k = Q_{k+1} D_k Q_k^T with Q_N = Q_0, so the product is similar to
  // prod D_k. Each factor is well conditioned, the product spans 120 decades.
  std::mt19937_64 rng(13);
  std::normal_distribution<double> g;
  const int n = 4, steps = 60;
  std::vector<Eigen::MatrixXd> qs;
  for (int k = 0; k < steps; ++k) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = g(rng);
    qs.push_back(Eigen::HouseholderQR<Eigen::MatrixXd>(m).householderQ());
  }
  const Eigen::Vector4d d(10.0, 3.0, 0.5, 0.1);
  std::vector<Eigen::MatrixXd> factors;
  for (int k = 0; k < steps; ++k) {
    const Eigen::MatrixXd& next = qs[static_cast<std::size_t>((k + 1) % steps)];
    factors.push_back(next * d.asDiagonal() * qs[static_cast<std::size_t>(k)].transpose());
  }
  const auto ev = product_eigenvalues(factors);
  std::vector<cd> expected;
  for (int i = 0; i < n; ++i) expected.emplace_back(std::pow(d[i], steps), 0.0);
  REQUIRE(ev.size() == 4);
  for (const cd& want : expected) {
    double best = 1e300;
    for (const cd& got : ev) best = std::min(best, std::abs(got - want) / std::abs(want));
    CHECK(best <= 1e-10);
  }
  CHECK_THROWS_AS(product_eigenvalues({}), Error);
}

TEST_CASE("classification examples") {
  const cd w = std::polar(1.0, kPi / 3);
  const StabilityPattern p = classify({w, std::conj(w), 3.0, 1.0 / 3.0});
  REQUIRE(p.factors.size() == 2);
  CHECK(p.factors[0].kind == FactorKind::Elliptic);
  CHECK(p.factors[0].value == doctest::Approx(kPi / 3));
  CHECK(p.factors[1].kind == FactorKind::Hyperbolic);
  CHECK(p.factors[1].value == doctest::Approx(3.0));
  CHECK(p.code() == "EH");

  CHECK(classify({1.0 / 3.0, 3.0, std::conj(w), w}).code() == "EH");
  CHECK(classify({-1.0, -1.0, w, std::conj(w)}).code() == "ED-");
  CHECK(classify({-2.0, -0.5, 1.0, 1.0}).code() == "D+H");
  const StabilityPattern neg = classify({-2.0, -0.5, 1.0, 1.0});
  CHECK(neg.factors[1].value == doctest::Approx(-2.0));

  const cd z = std::polar(2.0, 1.0);
  const StabilityPattern lox = classify({z, std::conj(z), 1.0 / z, 1.0 / std::conj(z)});
  CHECK(lox.code() == "QQ");
  CHECK(lox.factors[0].value == doctest::Approx(2.0));
  CHECK(lox.factors[0].phase == doctest::Approx(1.0));

  try {
    classify({2.0, 3.0, 0.5, 0.2});
    FAIL("expected AmbiguousPair");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AmbiguousPair);
  }
  CHECK_THROWS_AS(classify(std::vector<cd>{1.0, 1.0, 1.0}), Error);
}

TEST_CASE("ESSM-like blocks are elliptic plus hyperbolic") {
  for (double beta : {4.1481, 15.4442}) {
    const MonodromyResult r = integrate_monodromy(LinearizedBlock::essential(beta, 0.0549));
    const StabilityPattern p = classify(r);
    CHECK(p.code() == "EH");
    CHECK(p.factors[0].value > 0.0);
    CHECK(p.factors[0].value < kPi);
    CHECK(std::abs(p.factors[1].value) > 1.0);
  }
}

TEST_CASE("circular frequency and resonances") {
  for (double beta : {0.0, 0.5, 2.7, 10.0, 24.0}) {
    CHECK(circular_frequency(beta) == doctest::Approx(oracle::circular_omega(beta)).epsilon(1e-12));
  }
  const auto res = resonance_betas(8);
  REQUIRE(res.size() == 8);
  CHECK(res[0].beta == 0.0);
  CHECK(res[0].order == 1.0);
  for (std::size_t k = 0; k < res.size(); ++k) {
    const double order = 1.0 + 0.5 * static_cast<double>(k);
    CHECK(res[k].order == order);
    CHECK(res[k].multiplier_sign == (k % 2 == 0 ? 1 : -1));
    CHECK(std::abs(res[k].beta - oracle::resonance_beta(order)) <= 1e-8);
    if (k > 0) CHECK(res[k].beta > res[k - 1].beta);
  }
  CHECK(std::abs(res[2].beta - 2.7122) <= 1e-3);
  CHECK(std::abs(res[3].beta - 4.9437) <= 1e-3);
  CHECK(std::abs(res[6].beta - 14.6764) <= 1e-3);
  CHECK(std::abs(res[7].beta - 18.9243) <= 1e-3);
  CHECK(resonance_betas(0).empty());
  CHECK_THROWS_AS(resonance_betas(9), Error);
  CHECK_THROWS_AS(resonance_betas(-1), Error);

  // At a resonance the circular monodromy has a double multiplier +-1.
  for (std::size_t k : {2u, 3u}) {
    const MonodromyResult r = integrate_monodromy(LinearizedBlock::essential(res[k].beta, 0.0));
    const std::string code = classify(r).code();
    CHECK(code == (res[k].multiplier_sign > 0 ? "D+H" : "D-H"));
  }
}

TEST_CASE("multipliers move continuously along an eccentricity ray") {
  for (double beta : {1.0, 4.1481, 15.4442}) {
    std::vector<double> logs, angles;
    for (int k = 0; k <= 60; ++k) {
      const double e = 0.05 + 1e-3 * k;
      const StabilityPattern p = classify(integrate_monodromy(LinearizedBlock::essential(beta, e)));
      REQUIRE(p.code() == "EH");
      angles.push_back(p.factors[0].value);
      logs.push_back(std::log(std::abs(p.factors[1].value)));
    }
    for (const auto* f : {&logs, &angles}) {
      double first = 0.0, second = 0.0;
      for (std::size_t k = 1; k < f->size(); ++k) first = std::max(first, std::abs((*f)[k] - (*f)[k - 1]));
      for (std::size_t k = 2; k < f->size(); ++k)
        second = std::max(second, std::abs((*f)[k] - 2 * (*f)[k - 1] + (*f)[k - 2]));
      CHECK(first <= 1e-2);
      CHECK(second <= 0.05 * first);
    }
  }
}

TEST_CASE("full system multipliers are the union of the blocks") {
  const std::vector<double> betas{1.4, 6.0};
  const double e = 0.2;
  const MonodromyResult full = integrate_full_monodromy(betas, e);
  REQUIRE(full.multipliers.size() == 12);
  std::vector<cd> blocks;
  for (double b : {0.0, betas[0], betas[1]}) {
    const auto m = integrate_monodromy(LinearizedBlock::essential(b, e)).multipliers;
    blocks.insert(blocks.end(), m.begin(), m.end());
  }
  CHECK(oracle::multiset_distance(full.multipliers, blocks) <= 1e-6);
  CHECK(oracle::multiset_distance(blocks, full.multipliers) <= 1e-6);
  CHECK(full.relative_symplectic_residual <= 1e-8);
}

TEST_CASE("stability scan") {
  const ScanGrid one = stability_scan(AxisRange{4.1481, 4.1481, 1}, AxisRange{0.0549, 0.0549, 1});
  REQUIRE(one.cells.size() == 1);
  CHECK(one.cells[0].pattern == "EH");
  CHECK_FALSE(one.cells[0].failed);

  const double b2 = resonance_betas(3)[2].beta;
  const ScanGrid row = stability_scan(std::vector<double>{2.6, b2, 2.8}, std::vector<double>{0.0});
  CHECK(row.cells[1].pattern == "D+H");
  CHECK(row.cells[0].pattern != "D+H");
  CHECK(row.cells[2].pattern != "D+H");

  const ScanGrid column = stability_scan(AxisRange{0.0, 0.0, 1}, AxisRange{0.0, 0.9, 4});
  REQUIRE(column.cells.size() == 4);
  for (const auto& c : column.cells) CHECK(c.pattern == "D+D+");

  const ScanGrid grid = stability_scan(AxisRange{1.0, 3.0, 3}, AxisRange{0.1, 0.5, 2});
  REQUIRE(grid.cells.size() == 6);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    CHECK(grid.cells[i].beta == grid.betas[i / 2]);
    CHECK(grid.cells[i].e == grid.eccentricities[i % 2]);
  }
  CHECK(grid.betas == std::vector<double>{1.0, 2.0, 3.0});

  ScanOptions serial;
  serial.threads = 1;
  const ScanGrid again = stability_scan(AxisRange{1.0, 3.0, 3}, AxisRange{0.1, 0.5, 2}, serial);
  for (std::size_t i = 0; i < grid.cells.size(); ++i) {
    CHECK(grid.cells[i].multipliers == again.cells[i].multipliers);
    CHECK(grid.cells[i].pattern == again.cells[i].pattern);
  }

  CHECK(stability_scan(AxisRange{1.0, 2.0, 0}, AxisRange{0.1, 0.2, 3}).cells.empty());
  CHECK_THROWS_AS(stability_scan(AxisRange{0.0, 60.0, 2}, AxisRange{0.0, 0.5, 2}), Error);
  CHECK_THROWS_AS(stability_scan(AxisRange{0.0, 1.0, 2}, AxisRange{0.0, 0.995, 2}), Error);
  CHECK_THROWS_AS(stability_scan(AxisRange{0.0, 1.0, 501}, AxisRange{0.0, 0.5, 2}), Error);

  // A failing cell is marked without aborting the scan.
  const ScanGrid bad = stability_scan(std::vector<double>{1.0}, std::vector<double>{0.1, 1.5});
  CHECK_FALSE(bad.cells[0].failed);
  CHECK(bad.cells[1].failed);
  CHECK(bad.cells[1].pattern == "Failed");
}
