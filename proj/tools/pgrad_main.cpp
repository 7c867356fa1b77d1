#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "pgrad/errors.hpp"
#include "pgrad/profile_io.hpp"
#include "pgrad/run_config.hpp"

namespace {

const std::string kAllowedKeys[] = {
    "problem.n",      "problem.p",      "problem.q",       "family.kind",  "family.k",
    "family.M",       "family.eps",     "grid.lo",         "grid.hi",      "grid.per_decade",
    "window.lo",      "window.hi",      "tol",             "geometry.R",   "curvature.B",
    "curvature.Btilde", "output.path",  "seed",
};

struct CommonFlags {
  std::string config_path;
  int n = -1;
  double p = -1, q = -1, k = -1, M = -1, eps = -1, R = -1, B = -1, Btilde = -1;
  double grid_lo = -1, grid_hi = -1, window_lo = -1, window_hi = -1, tol = -1;
  int grid_per_decade = -1;
  std::string family, out;

  void attach(CLI::App* app) {
    app->add_option("--config", config_path, "key=value configuration file");
    app->add_option("--n", n, "spatial dimension");
    app->add_option("--p", p, "p-Laplacian exponent");
    app->add_option("--q", q, "gradient absorption exponent");
    app->add_option("--family", family, "family kind");
    app->add_option("--k", k, "flux parameter (or raw K for the critical family)");
    app->add_option("--M", M, "limit at infinity");
    app->add_option("--eps", eps, "blow-up radius");
    app->add_option("--R", R, "ball radius / distance scale");
    app->add_option("--B", B, "Ricci curvature scale");
    app->add_option("--Btilde", Btilde, "sectional curvature scale");
    app->add_option("--grid-lo", grid_lo, "grid lower end");
    app->add_option("--grid-hi", grid_hi, "grid upper end");
    app->add_option("--grid-per-decade", grid_per_decade, "grid density");
    app->add_option("--window-lo", window_lo, "classification window lower end");
    app->add_option("--window-hi", window_hi, "classification window upper end");
    app->add_option("--tol", tol, "classification tolerance");
    app->add_option("--out", out, "output path (atomic write; stdout when absent)");
  }

  pgrad::RunConfig merge() const {
    pgrad::RunConfig cfg;
    if (!config_path.empty()) cfg = pgrad::RunConfig::parse_file(config_path);
    cfg.require_known_keys(kAllowedKeys);
    auto set_if = [&cfg](const char* key, double v) {
      if (v >= 0) cfg.set(key, pgrad::format_double(v));
    };
    if (n >= 0) cfg.set("problem.n", std::to_string(n));
    set_if("problem.p", p);
    set_if("problem.q", q);
    if (!family.empty()) cfg.set("family.kind", family);
    set_if("family.k", k);
    set_if("family.M", M);
    set_if("family.eps", eps);
    set_if("geometry.R", R);
    set_if("curvature.B", B);
    set_if("curvature.Btilde", Btilde);
    set_if("grid.lo", grid_lo);
    set_if("grid.hi", grid_hi);
    if (grid_per_decade >= 0) cfg.set("grid.per_decade", std::to_string(grid_per_decade));
    set_if("window.lo", window_lo);
    set_if("window.hi", window_hi);
    set_if("tol", tol);
    if (!out.empty()) cfg.set("output.path", out);
    return cfg;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for -div(|Du|^{p-2}Du) + |Du|^q = 0"};
  app.require_subcommand(1);

  CommonFlags constants_flags, family_flags, verify_flags, classify_flags;
  std::string verify_which, classify_input;

  CLI::App* constants = app.add_subcommand("constants", "critical exponents and explicit constants");
  constants_flags.attach(constants);
  CLI::App* family = app.add_subcommand("family", "evaluate a radial solution family to CSV");
  family_flags.attach(family);
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("which", verify_which,
                     "gradient-bound | supersolution | supersolution-manifold | harnack | "
                     "liouville | sphere-constant")
      ->required();
  verify_flags.attach(verify);
  CLI::App* classify = app.add_subcommand("classify", "classify a sampled profile near r = 0");
  classify->add_option("input", classify_input, "profile CSV path")->required();
  classify_flags.attach(classify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "error: " << e.what() << "\n";
    return pgrad::cli::kExitInput;
  }

  try {
    if (constants->parsed()) return pgrad::cli::cmd_constants(constants_flags.merge());
    if (family->parsed()) return pgrad::cli::cmd_family(family_flags.merge());
    if (verify->parsed()) return pgrad::cli::cmd_verify(verify_flags.merge(), verify_which);
    if (classify->parsed()) return pgrad::cli::cmd_classify(classify_flags.merge(), classify_input);
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return pgrad::cli::kExitInput;
  } catch (const pgrad::ConflictingFits& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return pgrad::cli::kExitInconclusive;
  } catch (const pgrad::InsufficientSamples& e) {
    std::cerr << "inconclusive: " << e.what() << "\n";
    return pgrad::cli::kExitInconclusive;
  } catch (const pgrad::Error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return pgrad::cli::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return pgrad::cli::kExitNumerical;
  }
  return pgrad::cli::kExitInput;
}
