// cmkz: command-line front end (spectrum, verify, fiber).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "cmkz/calogero_moser.hpp"
#include "cmkz/harness.hpp"
#include "cmkz/json_io.hpp"
#include "cmkz/partitions.hpp"
#include "cmkz/polynomial.hpp"
#include "cmkz/random.hpp"
#include "cmkz/tensor_gaudin.hpp"
#include "cmkz/wronski.hpp"

namespace {

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kUsage = 2;

int emit(const cmkz::Json& doc, const std::string& path) {
  const std::string text = doc.dump(2) + "\n";
  std::cout << text;
  if (!path.empty()) {
    std::ofstream out(path);
    if (!out) {
      std::cerr << "cmkz: cannot write " << path << "\n";
      return kUsage;
    }
    out << text;
  }
  return kPass;
}

int run_spectrum(int n, const std::string& lambda_text, std::uint64_t seed, const std::string& json_path) {
  const auto lambda = cmkz::parse_partition(lambda_text);
  if (lambda.weight() != n) throw cmkz::InvalidArgument("|lambda| must equal n");
  cmkz::Rng rng(cmkz::derive_seed(seed, "spectrum"));
  const auto z = cmkz::sample_generic_positions(static_cast<std::size_t>(n), rng);
  const auto pts = cmkz::spectral_points(lambda, z, std::max(1, lambda.length()));

  bool ok = pts.size() == cmkz::irrep_dimension(lambda);
  cmkz::Json points = cmkz::Json::array();
  cmkz::Json residuals = cmkz::Json::array();
  for (const auto& pt : pts) {
    points.push_back(cmkz::to_json(pt));
    const double r = cmkz::l0_residual(pt.z, pt.p);
    residuals.push_back(r);
    ok = ok && r <= 1e-8;
  }
  const cmkz::Json doc{{"lambda", cmkz::to_json(lambda)},
                       {"n", n},
                       {"seed", seed},
                       {"z", cmkz::complex_vector_to_json(z)},
                       {"expected", cmkz::irrep_dimension(lambda)},
                       {"points", points},
                       {"l0_residuals", residuals},
                       {"pass", ok}};
  const int rc = emit(doc, json_path);
  return rc != kPass ? rc : (ok ? kPass : kCheckFailure);
}

int run_fiber(const std::string& lambda_text, std::uint64_t sigma_seed, const std::string& json_path) {
  const auto lambda = cmkz::parse_partition(lambda_text);
  const int n = lambda.weight();
  cmkz::Rng rng(cmkz::derive_seed(sigma_seed, "sigma"));
  auto roots = cmkz::sample_generic_positions(static_cast<std::size_t>(n), rng);
  std::sort(roots.begin(), roots.end(), cmkz::lex_less);
  const auto sigma = cmkz::elementary_symmetric(roots);

  cmkz::FiberOptions opt;
  opt.seed = cmkz::derive_seed(sigma_seed, "starts");
  const auto res = cmkz::wronski_fiber(lambda, sigma, opt);
  bool ok = res.solutions.size() == res.expected;
  cmkz::Json solutions = cmkz::Json::array();
  cmkz::Json images = cmkz::Json::array();
  for (std::size_t k = 0; k < res.solutions.size(); ++k) {
    solutions.push_back(cmkz::to_json(res.solutions[k]));
    images.push_back(cmkz::to_json(cmkz::psi(res.solutions[k])));
    ok = ok && res.residuals[k] <= 1e-9;
  }
  const cmkz::Json doc{{"lambda", cmkz::to_json(lambda)},
                       {"sigma_seed", sigma_seed},
                       {"sigma", cmkz::complex_vector_to_json(sigma)},
                       {"roots", cmkz::complex_vector_to_json(roots)},
                       {"expected", res.expected},
                       {"solutions", solutions},
                       {"residuals", res.residuals},
                       {"psi", images},
                       {"pass", ok}};
  const int rc = emit(doc, json_path);
  return rc != kPass ? rc : (ok ? kPass : kCheckFailure);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaudin spectra and Calogero-Moser level sets"};
  app.require_subcommand(1);

  int n = 0;
  std::string lambda_text;
  std::uint64_t seed = 1;
  std::string json_path;
  auto* spectrum = app.add_subcommand("spectrum", "joint Gaudin spectrum on Sing[lambda] at seeded random z");
  spectrum->add_option("--n", n, "number of sites")->required()->check(CLI::Range(1, 8));
  spectrum->add_option("--lambda", lambda_text, "partition, e.g. 2,1")->required();
  spectrum->add_option("--seed", seed, "random seed");
  spectrum->add_option("--json", json_path, "also write the output to this file");

  cmkz::VerificationConfig cfg;
  auto* verify = app.add_subcommand("verify", "run a verification suite and print its report");
  verify->add_option("--suite", cfg.suite, "l0|lq|bethe|wronski|identities|collision")
      ->required()
      ->check(CLI::IsMember({"l0", "lq", "bethe", "wronski", "identities", "collision"}));
  verify->add_option("--n-min", cfg.n_min, "smallest n");
  verify->add_option("--n-max", cfg.n_max, "largest n");
  verify->add_option("--trials", cfg.trials, "random configurations per check");
  verify->add_option("--seed", cfg.seed, "master seed");
  verify->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  verify->add_option("--timeout", cfg.check_timeout_seconds, "per-check time budget in seconds");
  verify->add_option("--json", json_path, "also write the report to this file");

  std::uint64_t sigma_seed = 1;
  auto* fiber = app.add_subcommand("fiber", "solve the Wronski map on X_lambda over a seeded random target");
  fiber->add_option("--lambda", lambda_text, "partition, padded with zeros to n parts")->required();
  fiber->add_option("--sigma-seed", sigma_seed, "seed of the target polynomial");
  fiber->add_option("--json", json_path, "also write the output to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (spectrum->parsed()) return run_spectrum(n, lambda_text, seed, json_path);
    if (fiber->parsed()) return run_fiber(lambda_text, sigma_seed, json_path);
    cfg.validate();
    const auto report = cmkz::run_suite(cfg);
    const int rc = emit(report.to_json(), json_path);
    return rc != kPass ? rc : (report.pass() ? kPass : kCheckFailure);
  } catch (const cmkz::InvalidArgument& e) {
    std::cerr << "cmkz: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "cmkz: " << e.what() << "\n";
    return kCheckFailure;
  }
}
