#include "moulton/serialize.hpp"

#include <cstdio>
#include <ostream>

namespace moulton {

namespace {

json complex_list(const std::vector<std::complex<double>>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

std::vector<std::complex<double>> complex_list_from(const json& a) {
  std::vector<std::complex<double>> v;
  for (const auto& z : a) v.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  return v;
}

json vector_json(const Eigen::VectorXd& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

Eigen::VectorXd vector_from(const json& a) {
  const auto v = a.get<std::vector<double>>();
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Row-major nested arrays.
json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index k = 0; k < m.cols(); ++k) row[static_cast<std::size_t>(k)] = m(i, k);
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from(const json& rows) {
  const auto r = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.at(0).size());
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i)
    for (Eigen::Index k = 0; k < c; ++k)
      m(i, k) = rows.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).get<double>();
  return m;
}

const char* kind_name(FactorKind k) {
  switch (k) {
    case FactorKind::Elliptic: return "Elliptic";
    case FactorKind::Hyperbolic: return "Hyperbolic";
    case FactorKind::Degenerate: return "Degenerate";
    case FactorKind::Loxodromic: return "Loxodromic";
  }
  return "Unknown";
}

FactorKind kind_from(const std::string& s) {
  if (s == "Elliptic") return FactorKind::Elliptic;
  if (s == "Hyperbolic") return FactorKind::Hyperbolic;
  if (s == "Degenerate") return FactorKind::Degenerate;
  if (s == "Loxodromic") return FactorKind::Loxodromic;
  throw Error(ErrorKind::InvalidArgument, "from_json", "unknown factor kind " + s);
}

}  // namespace

void to_json(json& j, const MassVector& m) {
  j = std::vector<double>(m.values().begin(), m.values().end());
}

MassVector masses_from_json(const json& j) {
  return MassVector::from_normalized(j.get<std::vector<double>>());
}

void to_json(json& j, const CollinearConfig& c) {
  j = json{{"masses", c.masses}, {"positions", vector_json(c.positions)}, {"mu", c.mu}};
}

CollinearConfig config_from_json(const json& j) {
  return CollinearConfig{masses_from_json(j.at("masses")), vector_from(j.at("positions")),
                         j.at("mu").get<double>()};
}

void to_json(json& j, const ReductionSpectrum& s) {
  j = json{{"mu", s.mu},
           {"lambdas", vector_json(s.lambdas)},
           {"raw_lambdas", vector_json(s.raw_lambdas)},
           {"eigenvectors", matrix_json(s.eigenvectors)},
           {"betas", s.betas}};
}

void from_json(const json& j, ReductionSpectrum& s) {
  s.mu = j.at("mu").get<double>();
  s.lambdas = vector_from(j.at("lambdas"));
  s.raw_lambdas = vector_from(j.at("raw_lambdas"));
  s.eigenvectors = matrix_from(j.at("eigenvectors"));
  s.betas = j.at("betas").get<std::vector<double>>();
}

void to_json(json& j, const MonodromyResult& r) {
  j = json{{"gamma", matrix_json(r.gamma)},
           {"multipliers", complex_list(r.multipliers)},
           {"symplectic_residual", r.symplectic_residual},
           {"relative_symplectic_residual", r.relative_symplectic_residual},
           {"det", r.det}};
}

void from_json(const json& j, MonodromyResult& r) {
  r.gamma = matrix_from(j.at("gamma"));
  r.multipliers = complex_list_from(j.at("multipliers"));
  r.symplectic_residual = j.at("symplectic_residual").get<double>();
  r.relative_symplectic_residual = j.at("relative_symplectic_residual").get<double>();
  r.det = j.at("det").get<double>();
}

void to_json(json& j, const StabilityFactor& f) {
  j = json{{"kind", kind_name(f.kind)}, {"value", f.value}, {"phase", f.phase}};
}

void from_json(const json& j, StabilityFactor& f) {
  f.kind = kind_from(j.at("kind").get<std::string>());
  f.value = j.at("value").get<double>();
  f.phase = j.at("phase").get<double>();
}

void to_json(json& j, const StabilityPattern& p) {
  j = json{{"code", p.code()}, {"factors", p.factors}};
}

void from_json(const json& j, StabilityPattern& p) {
  p.factors = j.at("factors").get<std::vector<StabilityFactor>>();
}

void to_json(json& j, const ResonanceValue& r) {
  j = json{{"beta", r.beta}, {"order", r.order}, {"multiplier_sign", r.multiplier_sign}};
}

void from_json(const json& j, ResonanceValue& r) {
  r.beta = j.at("beta").get<double>();
  r.order = j.at("order").get<double>();
  r.multiplier_sign = j.at("multiplier_sign").get<int>();
}

void to_json(json& j, const FourBodyFamily& f) {
  j = json{{"m", f.m},         {"tau", f.tau},     {"eps", f.eps},
           {"x", f.x},         {"y", f.y},         {"alpha", f.alpha},
           {"mu", f.mu},       {"delta", f.delta}, {"delta_tilde", f.delta_tilde},
           {"beta1", f.beta1}, {"beta2", f.beta2}};
}

void from_json(const json& j, FourBodyFamily& f) {
  f.m = j.at("m").get<double>();
  f.tau = j.at("tau").get<double>();
  f.eps = j.at("eps").get<double>();
  f.x = j.at("x").get<double>();
  f.y = j.at("y").get<double>();
  f.alpha = j.at("alpha").get<double>();
  f.mu = j.at("mu").get<double>();
  f.delta = j.at("delta").get<double>();
  f.delta_tilde = j.at("delta_tilde").get<double>();
  f.beta1 = j.at("beta1").get<double>();
  f.beta2 = j.at("beta2").get<double>();
}

void to_json(json& j, const FourBodyLimit& l) {
  j = json{{"m", l.m},       {"tau", l.tau},   {"x0", l.x0},           {"alpha0", l.alpha0},
           {"mu0", l.mu0},   {"beta", l.beta}, {"beta1_0", l.beta1_0}, {"beta2_0", l.beta2_0}};
}

void from_json(const json& j, FourBodyLimit& l) {
  l.m = j.at("m").get<double>();
  l.tau = j.at("tau").get<double>();
  l.x0 = j.at("x0").get<double>();
  l.alpha0 = j.at("alpha0").get<double>();
  l.mu0 = j.at("mu0").get<double>();
  l.beta = j.at("beta").get<double>();
  l.beta1_0 = j.at("beta1_0").get<double>();
  l.beta2_0 = j.at("beta2_0").get<double>();
}

void to_json(json& j, const EssmReport& r) {
  j = json{{"earth_mass", r.earth_mass},
           {"moon_mass", r.moon_mass},
           {"distance_km", r.distance_km},
           {"e", r.e},
           {"m", r.m},
           {"x0", r.x0},
           {"station_distance_km", r.station_distance_km},
           {"beta1", r.beta1},
           {"beta2", r.beta2},
           {"resonances", r.resonances},
           {"beta1_interleaved", r.beta1_interleaved},
           {"beta2_interleaved", r.beta2_interleaved},
           {"pattern", r.pattern_code()},
           {"rounded", json{{"m", r.rounded.m},
                            {"x0", r.rounded.x0},
                            {"station_distance_km", r.rounded.station_distance_km},
                            {"beta1", r.rounded.beta1},
                            {"beta2", r.rounded.beta2}}},
           {"blocks", json::array({json{{"beta", r.beta1},
                                        {"pattern", r.pattern1},
                                        {"multipliers", complex_list(r.multipliers1)}},
                                   json{{"beta", r.beta2},
                                        {"pattern", r.pattern2},
                                        {"multipliers", complex_list(r.multipliers2)}}})}};
}

void from_json(const json& j, EssmReport& r) {
  r.earth_mass = j.at("earth_mass").get<double>();
  r.moon_mass = j.at("moon_mass").get<double>();
  r.distance_km = j.at("distance_km").get<double>();
  r.e = j.at("e").get<double>();
  r.m = j.at("m").get<double>();
  r.x0 = j.at("x0").get<double>();
  r.station_distance_km = j.at("station_distance_km").get<double>();
  r.beta1 = j.at("beta1").get<double>();
  r.beta2 = j.at("beta2").get<double>();
  r.resonances = j.at("resonances").get<std::vector<ResonanceValue>>();
  r.beta1_interleaved = j.at("beta1_interleaved").get<bool>();
  r.beta2_interleaved = j.at("beta2_interleaved").get<bool>();
  const json& rd = j.at("rounded");
  r.rounded.m = rd.at("m").get<double>();
  r.rounded.x0 = rd.at("x0").get<double>();
  r.rounded.station_distance_km = rd.at("station_distance_km").get<double>();
  r.rounded.beta1 = rd.at("beta1").get<double>();
  r.rounded.beta2 = rd.at("beta2").get<double>();
  const json& blocks = j.at("blocks");
  r.pattern1 = blocks.at(0).at("pattern").get<StabilityPattern>();
  r.pattern2 = blocks.at(1).at("pattern").get<StabilityPattern>();
  r.multipliers1 = complex_list_from(blocks.at(0).at("multipliers"));
  r.multipliers2 = complex_list_from(blocks.at(1).at("multipliers"));
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void emit_scan_csv(const ScanGrid& grid, std::ostream& out) {
  out << "beta,e,m1_re,m1_im,m2_re,m2_im,m3_re,m3_im,m4_re,m4_im,pattern\n";
  for (const auto& cell : grid.cells) {
    out << format_double(cell.beta) << ',' << format_double(cell.e);
    for (std::size_t k = 0; k < 4; ++k) {
      if (k < cell.multipliers.size()) {
        out << ',' << format_double(cell.multipliers[k].real()) << ','
            << format_double(cell.multipliers[k].imag());
      } else {
        out << ",nan,nan";
      }
    }
    out << ',' << cell.pattern << '\n';
  }
}

}  // namespace moulton
