#include "moulton/monodromy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>
#include <string>
#include <thread>

#include <boost/numeric/odeint.hpp>

namespace moulton {

namespace {

namespace odeint = boost::numeric::odeint;

template <typename S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

constexpr int kMaxSweeps = 60;
constexpr int kStableSweeps = 8;
constexpr double kSplitTol = 1e-10;

void check_ecc(double e, const char* op) {
  if (!(e >= 0.0 && e < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, op,
                "eccentricity " + std::to_string(e) + " outside [0,1)");
  }
}

template <typename S>
Mat<S> symplectic(Eigen::Index dim) {
  const Eigen::Index h = dim / 2;
  Mat<S> j = Mat<S>::Zero(dim, dim);
  j.topRightCorner(h, h) = -Mat<S>::Identity(h, h);
  j.bottomLeftCorner(h, h) = Mat<S>::Identity(h, h);
  return j;
}

// Coefficient matrix of the direct sum of blocks with the given mass
// parameters (0 is the Kepler block), in the ordering (Z, W..., z, w...).
template <typename S>
Mat<S> direct_sum_B(const std::vector<double>& block_betas, S e, S theta) {
  const auto k = static_cast<Eigen::Index>(block_betas.size());
  const Eigen::Index half = 2 * k;
  Mat<S> b = Mat<S>::Zero(2 * half, 2 * half);
  const S c = e * std::cos(theta);
  b.topLeftCorner(half, half).setIdentity();
  for (Eigen::Index i = 0; i < k; ++i) {
    const Eigen::Index p = 2 * i;
    const Eigen::Index q = half + 2 * i;
    // -J in the (Z, z) corner, J in the (z, Z) corner.
    b(p, q + 1) = 1;
    b(p + 1, q) = -1;
    b(q, p + 1) = -1;
    b(q + 1, p) = 1;
    const S beta = static_cast<S>(block_betas[static_cast<std::size_t>(i)]);
    b(q, q) = -(2 * beta + 2 - c) / (1 + c);
    b(q + 1, q + 1) = (beta + 1 + c) / (1 + c);
  }
  return b;
}

template <typename S>
double inf_norm(const Mat<S>& m) {
  return static_cast<double>(m.cwiseAbs().rowwise().sum().maxCoeff());
}

template <typename S>
void positive_qr(const Mat<S>& a, Mat<S>& q, Mat<S>& r) {
  const Eigen::Index n = a.rows();
  Eigen::HouseholderQR<Mat<S>> qr(a);
  q = qr.householderQ() * Mat<S>::Identity(n, n);
  r = qr.matrixQR().template triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r(i, i) < 0) {
      r.row(i) *= -1;
      q.col(i) *= -1;
    }
  }
}

// Block boundaries where the strictly lower part of g is negligible.
template <typename S>
std::vector<Eigen::Index> split_points(const Mat<S>& g) {
  const Eigen::Index n = g.rows();
  std::vector<Eigen::Index> cuts{0};
  for (Eigen::Index s = 1; s < n; ++s) {
    if (static_cast<double>(g.bottomLeftCorner(n - s, s).cwiseAbs().maxCoeff()) <= kSplitTol) {
      cuts.push_back(s);
    }
  }
  cuts.push_back(n);
  return cuts;
}

template <typename S>
std::vector<std::complex<double>> periodic_eigenvalues(const std::vector<Mat<S>>& factors) {
  const Eigen::Index n = factors.front().rows();
  // A generic start: from the identity, block-diagonal factors never mix
  // their coordinate subspaces and the moduli never get sorted.
  std::mt19937_64 rng(0x5eed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Mat<S> start(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) start(i, j) = static_cast<S>(unif(rng));
  Mat<S> q0, unused;
  positive_qr<S>(start, q0, unused);
  std::vector<Mat<S>> rs(factors.size());
  Mat<S> g;
  std::vector<Eigen::Index> cuts, previous;
  int stable = 0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    Mat<S> q = q0;
    for (std::size_t k = 0; k < factors.size(); ++k) {
      Mat<S> qn;
      positive_qr<S>(factors[k] * q, qn, rs[k]);
      q = std::move(qn);
    }
    g = q0.transpose() * q;
    cuts = split_points<S>(g);
    stable = (cuts == previous) ? stable + 1 : 0;
    previous = cuts;
    q0 = std::move(q);
    const bool fully_split = static_cast<Eigen::Index>(cuts.size()) == n + 1;
    if (stable >= kStableSweeps || fully_split) break;
  }

  std::vector<std::complex<double>> out;
  for (std::size_t b = 0; b + 1 < cuts.size(); ++b) {
    const Eigen::Index s = cuts[b];
    const Eigen::Index len = cuts[b + 1] - s;
    Mat<S> p = Mat<S>::Identity(len, len);
    for (const auto& r : rs) p = r.block(s, s, len, len) * p;
    const Mat<S> t = g.block(s, s, len, len) * p;
    if (len == 1) {
      out.emplace_back(static_cast<double>(t(0, 0)), 0.0);
    } else {
      Eigen::EigenSolver<Mat<S>> es(t, false);
      for (Eigen::Index i = 0; i < len; ++i) {
        const auto v = es.eigenvalues()[i];
        out.emplace_back(static_cast<double>(v.real()), static_cast<double>(v.imag()));
      }
    }
  }
  return out;
}

template <typename S>
MonodromyResult integrate_direct_sum(const std::vector<double>& block_betas, double e,
                                     const IntegrationOptions& opts) {
  using State = std::vector<S>;
  const auto dim = static_cast<Eigen::Index>(4 * block_betas.size());
  const Mat<S> jm = symplectic<S>(dim);
  const S ecc = static_cast<S>(e);
  const S two_pi = 2 * std::numbers::pi_v<S>;
  const S tol = static_cast<S>(opts.tol);

  auto rhs = [&](const State& x, State& dxdt, S theta) {
    const Mat<S> a = jm * direct_sum_B<S>(block_betas, ecc, theta);
    Eigen::Map<const Mat<S>> phi(x.data(), dim, dim);
    Eigen::Map<Mat<S>> out(dxdt.data(), dim, dim);
    out.noalias() = a * phi;
  };

  using Stepper = odeint::runge_kutta_fehlberg78<State, S, State, S>;
  std::vector<Mat<S>> segments;
  segments.reserve(static_cast<std::size_t>(opts.segments));
  Mat<S> gamma = Mat<S>::Identity(dim, dim);
  for (int k = 0; k < opts.segments; ++k) {
    const S t0 = two_pi * k / opts.segments;
    const S t1 = two_pi * (k + 1) / opts.segments;
    State x(static_cast<std::size_t>(dim * dim), S(0));
    for (Eigen::Index i = 0; i < dim; ++i) x[static_cast<std::size_t>(i * dim + i)] = 1;
    try {
      odeint::integrate_adaptive(odeint::make_controlled<Stepper>(tol, tol), rhs, x, t0, t1,
                                 (t1 - t0) / 8);
    } catch (const std::exception& ex) {
      throw Error(ErrorKind::IntegratorFailure, "integrate_monodromy", ex.what());
    }
    Mat<S> phi = Eigen::Map<Mat<S>>(x.data(), dim, dim);
    if (!phi.allFinite()) {
      throw Error(ErrorKind::IntegratorFailure, "integrate_monodromy", "non-finite state");
    }
    gamma = phi * gamma;
    segments.push_back(std::move(phi));
  }

  MonodromyResult res;
  res.gamma = gamma.template cast<double>();
  const Mat<S> defect = gamma.transpose() * jm * gamma - jm;
  res.symplectic_residual = inf_norm<S>(defect);
  res.relative_symplectic_residual =
      res.symplectic_residual / std::max(1.0, std::pow(inf_norm<S>(gamma), 2));
  res.det = static_cast<double>(gamma.determinant());
  res.multipliers = periodic_eigenvalues<S>(segments);
  return res;
}

MonodromyResult integrate_blocks(const std::vector<double>& block_betas, double e,
                                 const IntegrationOptions& opts) {
  check_ecc(e, "integrate_monodromy");
  const double min_tol = opts.precision == Precision::Extended ? 1e-18 : 1e-13;
  if (!(opts.tol >= min_tol && opts.tol <= 1e-6)) {
    throw Error(ErrorKind::InvalidArgument, "integrate_monodromy",
                "tol " + std::to_string(opts.tol) + " outside the supported range");
  }
  if (opts.segments < 1) {
    throw Error(ErrorKind::InvalidArgument, "integrate_monodromy", "segments must be positive");
  }
  if (opts.precision == Precision::Extended) {
    return integrate_direct_sum<long double>(block_betas, e, opts);
  }
  return integrate_direct_sum<double>(block_betas, e, opts);
}

int factor_rank(const StabilityFactor& f) {
  switch (f.kind) {
    case FactorKind::Degenerate: return f.value > 0 ? 0 : 2;
    case FactorKind::Elliptic: return 1;
    case FactorKind::Loxodromic: return 3;
    case FactorKind::Hyperbolic: return 4;
  }
  return 5;
}

double factor_log_modulus(const StabilityFactor& f) {
  switch (f.kind) {
    case FactorKind::Hyperbolic:
    case FactorKind::Loxodromic: return std::log(std::abs(f.value));
    default: return 0.0;
  }
}

double factor_phase(const StabilityFactor& f) {
  switch (f.kind) {
    case FactorKind::Degenerate: return f.value > 0 ? 0.0 : std::numbers::pi;
    case FactorKind::Elliptic: return f.value;
    case FactorKind::Hyperbolic: return f.value > 0 ? 0.0 : std::numbers::pi;
    case FactorKind::Loxodromic: return f.phase;
  }
  return 0.0;
}

}  // namespace

Eigen::Matrix4d block_coefficient(const LinearizedBlock& block, double theta) {
  check_ecc(block.e, "block_coefficient");
  const double beta = block.kind == BlockKind::Kepler ? 0.0 : block.beta;
  return direct_sum_B<double>({beta}, block.e, theta);
}

Eigen::MatrixXd assemble_full_B(const std::vector<double>& betas, double e, double theta) {
  check_ecc(e, "assemble_full_B");
  std::vector<double> blocks{0.0};
  blocks.insert(blocks.end(), betas.begin(), betas.end());
  return direct_sum_B<double>(blocks, e, theta);
}

Eigen::MatrixXd symplectic_J(Eigen::Index dim) { return symplectic<double>(dim); }

MonodromyResult integrate_monodromy(const LinearizedBlock& block, double tol) {
  IntegrationOptions opts;
  opts.tol = tol;
  return integrate_monodromy(block, opts);
}

MonodromyResult integrate_monodromy(const LinearizedBlock& block, const IntegrationOptions& opts) {
  const double beta = block.kind == BlockKind::Kepler ? 0.0 : block.beta;
  return integrate_blocks({beta}, block.e, opts);
}

MonodromyResult integrate_full_monodromy(const std::vector<double>& betas, double e,
                                         const IntegrationOptions& opts) {
  std::vector<double> blocks{0.0};
  blocks.insert(blocks.end(), betas.begin(), betas.end());
  return integrate_blocks(blocks, e, opts);
}

std::vector<std::complex<double>> product_eigenvalues(const std::vector<Eigen::MatrixXd>& factors) {
  if (factors.empty()) {
    throw Error(ErrorKind::InvalidArgument, "product_eigenvalues", "no factors");
  }
  return periodic_eigenvalues<double>(factors);
}

std::string StabilityPattern::code() const {
  std::string s;
  for (const auto& f : factors) {
    switch (f.kind) {
      case FactorKind::Elliptic: s += "E"; break;
      case FactorKind::Hyperbolic: s += "H"; break;
      case FactorKind::Degenerate: s += f.value > 0 ? "D+" : "D-"; break;
      case FactorKind::Loxodromic: s += "Q"; break;
    }
  }
  return s;
}

StabilityPattern classify(const std::vector<std::complex<double>>& multipliers,
                          const ClassifyOptions& opts) {
  using cd = std::complex<double>;
  std::vector<cd> rest = multipliers;
  if (rest.size() % 2 != 0) {
    throw Error(ErrorKind::AmbiguousPair, "classify", "odd number of multipliers");
  }
  StabilityPattern pattern;
  while (!rest.empty()) {
    std::size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rest.size(); ++i) {
      for (std::size_t j = i + 1; j < rest.size(); ++j) {
        const double c = std::abs(rest[i] * rest[j] - 1.0);
        if (c < best) {
          best = c;
          bi = i;
          bj = j;
        }
      }
    }
    if (!(best <= opts.pair_tol)) {
      throw Error(ErrorKind::AmbiguousPair, "classify",
                  "closest reciprocal product misses 1 by " + std::to_string(best));
    }
    cd rho = rest[bi];
    cd other = rest[bj];
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(bj));
    rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(bi));
    if (std::abs(other) > std::abs(rho) ||
        (std::abs(other) == std::abs(rho) && other.imag() > rho.imag())) {
      std::swap(rho, other);
    }

    StabilityFactor f;
    const bool near_plus = std::abs(rho - 1.0) < opts.degenerate_tol &&
                           std::abs(other - 1.0) < opts.degenerate_tol;
    const bool near_minus = std::abs(rho + 1.0) < opts.degenerate_tol &&
                            std::abs(other + 1.0) < opts.degenerate_tol;
    if (near_plus || near_minus) {
      f.kind = FactorKind::Degenerate;
      f.value = near_plus ? 1.0 : -1.0;
    } else if (std::abs(1.0 - std::abs(rho)) < opts.circle_tol &&
               std::abs(1.0 - std::abs(other)) < opts.circle_tol) {
      f.kind = FactorKind::Elliptic;
      f.value = std::abs(std::arg(rho));
    } else if (std::abs(rho.imag()) < opts.real_tol * std::abs(rho)) {
      f.kind = FactorKind::Hyperbolic;
      f.value = rho.real();
    } else {
      f.kind = FactorKind::Loxodromic;
      f.value = std::abs(rho);
      f.phase = std::abs(std::arg(rho));
    }
    pattern.factors.push_back(f);
  }
  std::stable_sort(pattern.factors.begin(), pattern.factors.end(),
                   [](const StabilityFactor& a, const StabilityFactor& b) {
                     const double la = factor_log_modulus(a), lb = factor_log_modulus(b);
                     if (la != lb) return la < lb;
                     const double pa = factor_phase(a), pb = factor_phase(b);
                     if (pa != pb) return pa < pb;
                     return factor_rank(a) < factor_rank(b);
                   });
  return pattern;
}

StabilityPattern classify(const MonodromyResult& result, double tol) {
  ClassifyOptions opts;
  opts.pair_tol = tol;
  return classify(result.multipliers, opts);
}

double circular_frequency(double beta) {
  const Eigen::Matrix4d a =
      symplectic<double>(4) * block_coefficient(LinearizedBlock::essential(beta, 0.0), 0.0);
  Eigen::EigenSolver<Eigen::Matrix4d> es(a, false);
  double omega = 0.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < 4; ++i) {
    const auto v = es.eigenvalues()[i];
    if (std::abs(v.real()) <= 1e-8 * scale) omega = std::max(omega, std::abs(v.imag()));
  }
  return omega;
}

std::vector<ResonanceValue> resonance_betas(int count) {
  if (count < 0 || count > 8) {
    throw Error(ErrorKind::InvalidArgument, "resonance_betas",
                "count " + std::to_string(count) + " outside [0, 8]");
  }
  constexpr double kLo = 0.0, kHi = 25.0, kScanStep = 0.01, kBisectTol = 1e-10;
  std::vector<ResonanceValue> out;
  for (int k = 2; static_cast<int>(out.size()) < count; ++k) {
    const double target = 0.5 * k;
    auto f = [&](double b) { return circular_frequency(b) - target; };
    ResonanceValue rv;
    rv.order = target;
    rv.multiplier_sign = (k % 2 == 0) ? 1 : -1;
    if (std::abs(f(kLo)) <= 1e-12) {
      rv.beta = kLo;
      out.push_back(rv);
      continue;
    }
    double a = kLo, fa = f(a);
    bool found = false;
    for (double b = kLo + kScanStep; b <= kHi + 1e-12; b += kScanStep) {
      const double fb = f(b);
      if ((fa < 0) != (fb < 0)) {
        double lo = a, hi = b;
        while (hi - lo > kBisectTol) {
          const double mid = 0.5 * (lo + hi);
          if ((f(mid) < 0) == (fa < 0)) lo = mid; else hi = mid;
        }
        rv.beta = 0.5 * (lo + hi);
        found = true;
        break;
      }
      a = b;
      fa = fb;
    }
    if (!found) {
      throw Error(ErrorKind::BracketFailure, "resonance_betas",
                  "no crossing of frequency " + std::to_string(target) + " in [0, 25]");
    }
    out.push_back(rv);
  }
  return out;
}

std::vector<double> AxisRange::samples() const {
  std::vector<double> v;
  if (count <= 0) return v;
  if (count == 1) return {lo};
  v.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    v.push_back(i + 1 == count ? hi : lo + (hi - lo) * i / (count - 1));
  }
  return v;
}

ScanGrid stability_scan(const AxisRange& beta_range, const AxisRange& e_range,
                        const ScanOptions& opts) {
  auto check = [](const AxisRange& r, double lo, double hi, const char* name) {
    if (!(r.lo >= lo && r.hi <= hi && r.lo <= r.hi) || r.count < 0 || r.count > 500) {
      throw Error(ErrorKind::InvalidArgument, "stability_scan",
                  std::string(name) + " range must lie in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] with at most 500 samples");
    }
  };
  check(beta_range, 0.0, 50.0, "beta");
  check(e_range, 0.0, 0.99, "eccentricity");
  return stability_scan(beta_range.samples(), e_range.samples(), opts);
}

ScanGrid stability_scan(const std::vector<double>& betas, const std::vector<double>& eccentricities,
                        const ScanOptions& opts) {
  ScanGrid grid;
  grid.betas = betas;
  grid.eccentricities = eccentricities;
  const std::size_t ne = eccentricities.size();
  grid.cells.resize(betas.size() * ne);

  unsigned threads = opts.threads;
  if (threads == 0) {
    threads = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MOULTON_STAB_THREADS")) {
      const long cap = std::strtol(env, nullptr, 10);
      if (cap > 0) threads = std::min(threads, static_cast<unsigned>(cap));
    }
  }
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.cells.size())));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx = next++; idx < grid.cells.size(); idx = next++) {
      ScanCell& cell = grid.cells[idx];
      cell.beta = betas[idx / ne];
      cell.e = eccentricities[idx % ne];
      try {
        const MonodromyResult r =
            integrate_monodromy(LinearizedBlock::essential(cell.beta, cell.e), opts.tol);
        cell.multipliers = r.multipliers;
        cell.pattern = classify(r).code();
      } catch (const std::exception& ex) {
        cell.failed = true;
        cell.pattern = "Failed";
        cell.error = ex.what();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return grid;
}

}  // namespace moulton
