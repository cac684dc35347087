#include "moulton/cli.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>

#include "CLI11.hpp"

#include "moulton/serialize.hpp"
#include "moulton/verify.hpp"

namespace moulton {

namespace {

AxisRange parse_range(const std::string& text, const std::string& flag) {
  AxisRange r;
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string::npos ? std::string::npos : text.find(':', c1 + 1);
  if (c2 == std::string::npos) {
    throw CLI::ValidationError(flag, "expected A:B:N, got '" + text + "'");
  }
  try {
    r.lo = std::stod(text.substr(0, c1));
    r.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    r.count = std::stoi(text.substr(c2 + 1));
  } catch (const std::exception&) {
    throw CLI::ValidationError(flag, "expected A:B:N, got '" + text + "'");
  }
  return r;
}

MassVector read_masses(const std::vector<double>& raw, std::ostream& err) {
  MassVector m = normalize_masses(raw);
  const double total = std::accumulate(raw.begin(), raw.end(), 0.0);
  if (std::abs(total - 1.0) > 1e-14) {
    err << "warning: masses normalized to unit total (input sum " << format_double(total)
        << ")\n";
  }
  return m;
}

bool is_input_error(ErrorKind k) {
  return k == ErrorKind::NonPositiveMass || k == ErrorKind::TooFewBodies ||
         k == ErrorKind::InvalidArgument;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear stability of elliptic collinear n-body solutions", "moulton_stab"};
  app.require_subcommand(1);

  std::vector<double> masses;
  auto* cc = app.add_subcommand("cc", "collinear central configuration");
  cc->add_option("--masses", masses, "comma-separated positive masses")
      ->required()
      ->delimiter(',');
  auto* betas = app.add_subcommand("betas", "reduction spectrum and mass parameters");
  betas->add_option("--masses", masses, "comma-separated positive masses")
      ->required()
      ->delimiter(',');

  double beta = 0.0, ecc = 0.0, tol = 1e-11;
  auto* mono = app.add_subcommand("monodromy", "period map of one essential block");
  mono->add_option("--beta", beta, "mass parameter")->required();
  mono->add_option("--ecc", ecc, "eccentricity in [0,1)")->required();
  mono->add_option("--tol", tol, "integrator tolerance in [1e-13, 1e-6]");

  std::string beta_spec, ecc_spec, out_path;
  auto* scan = app.add_subcommand("scan", "(beta, e) stability grid to CSV");
  scan->add_option("--beta", beta_spec, "A:B:N")->required();
  scan->add_option("--ecc", ecc_spec, "C:D:M")->required();
  scan->add_option("--out", out_path, "CSV output file")->required();
  scan->add_option("--tol", tol, "integrator tolerance");

  double m = 0.0, tau = 0.0, eps = 0.0;
  auto* four = app.add_subcommand("fourbody", "two-small-masses four-body family");
  four->add_option("--m", m, "primary mass in (0,1)")->required();
  four->add_option("--tau", tau, "mass ratio of the two small bodies")->required();
  four->add_option("--eps", eps, "small mass")->required();

  auto* essm = app.add_subcommand("essm", "Earth, two stations, Moon example");

  std::uint64_t seed = 1;
  int trials = 200;
  auto* verify = app.add_subcommand("verify", "random-mass property suites");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--trials", trials, "number of random mass vectors")
      ->check(CLI::Range(1, 100000));

  std::vector<std::string> argv_store{"moulton_stab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    json j;
    if (cc->parsed()) {
      const CollinearConfig cfg = solve_collinear_cc(read_masses(masses, err));
      j = cfg;
      j["cc_residual"] = cc_residual(cfg);
    } else if (betas->parsed()) {
      const CollinearConfig cfg = solve_collinear_cc(read_masses(masses, err));
      j = spectrum_and_betas(cfg);
    } else if (mono->parsed()) {
      const MonodromyResult r = integrate_monodromy(LinearizedBlock::essential(beta, ecc), tol);
      j = r;
      j["beta"] = beta;
      j["e"] = ecc;
      j["pattern"] = classify(r);
    } else if (scan->parsed()) {
      AxisRange br, er;
      try {
        br = parse_range(beta_spec, "--beta");
        er = parse_range(ecc_spec, "--ecc");
      } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
      }
      ScanOptions opts;
      opts.tol = tol;
      const ScanGrid grid = stability_scan(br, er, opts);
      std::ofstream f(out_path, std::ios::binary);
      if (!f) {
        err << "scan: cannot open " << out_path << " for writing\n";
        return 1;
      }
      emit_scan_csv(grid, f);
      std::size_t failed = 0;
      for (const auto& c : grid.cells) failed += c.failed ? 1 : 0;
      j = json{{"out", out_path}, {"cells", grid.cells.size()}, {"failed", failed}};
    } else if (four->parsed()) {
      j = solve_family(m, tau, eps);
      j["limit"] = limit_quantities(m, tau);
    } else if (essm->parsed()) {
      j = essm_report();
    } else if (verify->parsed()) {
      const VerifySummary s = run_verification(seed, trials);
      j = json{{"seed", seed},
               {"lemma_trials", s.lemma_trials},
               {"lemma_failures", s.lemma_failures},
               {"worst_top_eigenvalue", s.worst_top_eigenvalue},
               {"worst_zero_eigenvalue", s.worst_zero_eigenvalue},
               {"worst_rest_eigenvalue", s.worst_rest_eigenvalue},
               {"min_beta", s.min_beta},
               {"worst_orthonormality", s.worst_orthonormality},
               {"decoupling_cases", s.decoupling_cases},
               {"decoupling_failures", s.decoupling_failures},
               {"worst_off_block", s.worst_off_block},
               {"worst_block_error", s.worst_block_error},
               {"ok", s.ok()}};
      out << j.dump(2) << "\n";
      if (!s.ok()) {
        err << "verify: property suite failed\n";
        return 1;
      }
      return 0;
    }
    out << j.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return is_input_error(e.kind()) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace moulton
