#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "pgrad/bounds.hpp"
#include "pgrad/manifold.hpp"
#include "pgrad/profile_io.hpp"
#include "pgrad/radial_families.hpp"
#include "pgrad/radial_ode.hpp"
#include "pgrad/singularity.hpp"

namespace pgrad::cli {

using ordered_json = nlohmann::ordered_json;

bool log_enabled() {
  const char* env = std::getenv("PGRAD_LOG");
  return env != nullptr && std::string(env) != "off" && std::string(env) != "0" &&
         std::string(env)[0] != '\0';
}

void log_info(const std::string& msg) {
  if (log_enabled()) std::fprintf(stderr, "[pgrad] %s\n", msg.c_str());
}

namespace {

ProblemParams params_from(const RunConfig& cfg) {
  if (!cfg.has("problem.n") || !cfg.has("problem.p") || !cfg.has("problem.q"))
    throw std::invalid_argument("missing problem parameters (--n, --p, --q)");
  return ProblemParams(cfg.get_int("problem.n", 0), cfg.get_double("problem.p", 0.0),
                       cfg.get_double("problem.q", 0.0));
}

void emit(const RunConfig& cfg, const std::string& content) {
  const std::string path = cfg.get_string("output.path", "");
  if (path.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << '\n';
  } else {
    write_file_atomic(path, content);
    log_info("wrote " + path);
  }
}

FamilyDescriptor family_from(const RunConfig& cfg, const ProblemParams& params) {
  const std::string kind = cfg.get_string("family.kind", "");
  if (kind == "StrongSingular") return make_strong_singular(params);
  if (kind == "RegularFluxK") return make_regular_flux(params, cfg.get_double("family.k", 1.0));
  if (kind == "GlobalKM")
    return make_global(params, cfg.get_double("family.k", 1.0), cfg.get_double("family.M", 0.0));
  if (kind == "BlowupEps") return make_blowup(params, cfg.get_double("family.eps", 0.1));
  if (kind == "SingularPositiveU") return make_singular_positive(params);
  if (kind == "SingularNegativeV") return make_singular_negative(params);
  if (kind == "FundamentalMuP") return make_fundamental(params);
  if (kind == "CriticalNegativeProfile")
    return make_critical_negative(params, cfg.get_double("family.k", 0.0));
  throw std::invalid_argument("unknown family.kind '" + kind + "'");
}

}  // namespace

int cmd_constants(const RunConfig& cfg) {
  const ProblemParams params = params_from(cfg);
  emit(cfg, constants_record_json(params));
  return kExitOk;
}

int cmd_family(const RunConfig& cfg) {
  const ProblemParams params = params_from(cfg);
  const FamilyDescriptor desc = family_from(cfg, params);
  const double lo = cfg.get_double("grid.lo", 1e-4);
  const double default_hi = std::isfinite(desc.natural_r_max()) ? desc.natural_r_max() : 1e3;
  const double hi = cfg.get_double("grid.hi", default_hi);
  const int per_decade = cfg.get_int("grid.per_decade", 256);
  const std::vector<double> grid = geometric_grid(lo, hi, per_decade);
  const RadialProfile prof = evaluate_family(desc, grid);

  const std::string path = cfg.get_string("output.path", "");
  if (path.empty()) {
    std::cout << profile_to_csv(prof);
  } else {
    write_file_atomic(path, profile_to_csv(prof));
    write_file_atomic(path + ".json", profile_metadata_json(prof));
    log_info("wrote " + path + " and " + path + ".json");
  }
  return kExitOk;
}

namespace {

struct VerifyOutcome {
  ordered_json report;
  std::vector<std::string> failures;

  void require(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

VerifyOutcome verify_gradient_bound(const ProblemParams& params) {
  VerifyOutcome out;
  const double e = 1.0 / (params.q + 1.0 - params.p);
  const double saturation = std::pow(coefficient_b(params), e);
  const std::vector<double> grid = geometric_grid(1e-4, 1.0, 128);
  const RadialProfile inf = evaluate_family(make_strong_singular(params), grid);
  const GradientBoundReport rep =
      gradient_bound_check(inf, params, BoundaryGeometry{BoundaryGeometry::Kind::PunctureOnly});
  out.report["family"] = "StrongSingular";
  out.report["sup_product"] = rep.sup_product;
  out.report["argmax_r"] = rep.argmax_r;
  out.report["saturation_constant"] = saturation;
  out.require(std::fabs(rep.sup_product - saturation) <= 1e-9,
              "strong-singular product differs from b^{1/(q+1-p)}");
  ordered_json others = ordered_json::array();
  for (double k : {1.0, 2.0}) {
    const RadialProfile fam = evaluate_family(make_regular_flux(params, k), grid);
    const GradientBoundReport frep =
        gradient_bound_check(fam, params, BoundaryGeometry{BoundaryGeometry::Kind::PunctureOnly});
    others.push_back({{"k", k}, {"sup_product", frep.sup_product}});
    out.require(frep.sup_product <= rep.sup_product + 1e-6,
                "flux family exceeds the strong-singular product");
  }
  out.report["flux_families"] = others;
  return out;
}

VerifyOutcome verify_supersolution(const ProblemParams& params, double R) {
  VerifyOutcome out;
  const BernsteinConstants consts = BernsteinConstants::defaults(params);
  const double lam = calibrate_lambda(params, R, consts);
  const SupersolutionReport rep = bernstein_residual_euclidean(params, R, lam, consts);
  out.report["lambda_star"] = lam;
  out.report["residual_min"] = rep.residual_min;
  out.report["endpoint_bracket"] = rep.endpoint_bracket;
  out.require(rep.valid(), "calibrated barrier has negative residual");
  // homogeneity lambda*(2R)/lambda*(R) = 4^{1/(q+1-p)}
  const double lam2 = calibrate_lambda(params, 2.0 * R, consts);
  const double expect = std::pow(4.0, 1.0 / (params.q + 1.0 - params.p));
  out.report["doubling_ratio"] = lam2 / lam;
  out.report["doubling_expected"] = expect;
  out.require(std::fabs(lam2 / lam - expect) <= 1e-3 * expect,
              "lambda* homogeneity violated under R doubling");
  return out;
}

VerifyOutcome verify_supersolution_manifold(const ProblemParams& params, double R, double B,
                                            double Btilde) {
  VerifyOutcome out;
  const BernsteinConstants consts = BernsteinConstants::defaults(params);
  const CurvatureBounds curv{B, Btilde, params.p};
  const double c = calibrate_manifold_scale(params, curv, R, consts);
  const double lam = c * manifold_lambda_form(params, curv, R);
  const double mu = manifold_mu_threshold(params, B);
  const SupersolutionReport rep = bernstein_residual_manifold(params, curv, R, lam, mu, consts, {});
  out.report["scale_c"] = c;
  out.report["lambda"] = lam;
  out.report["mu"] = mu;
  out.report["residual_min"] = rep.residual_min;
  out.require(rep.valid(), "calibrated curvature barrier has negative residual");
  if (B == 0.0 && Btilde == 0.0) {
    const SupersolutionReport eu = bernstein_residual_euclidean(params, R, lam, consts);
    double gap = 0.0;
    for (size_t i = 0; i < eu.residual_grid.size(); ++i)
      gap = std::max(gap, std::fabs(eu.residual_grid[i] - rep.residual_grid[i]));
    out.report["euclidean_gap"] = gap;
    out.require(gap <= 1e-12, "B = 0 does not reduce to the Euclidean residual");
  }
  return out;
}

VerifyOutcome verify_harnack(const ProblemParams& params) {
  VerifyOutcome out;
  const std::vector<double> grid = geometric_grid(1e-2, 1.0, 256);
  double worst = 0.0;
  ordered_json table = ordered_json::array();
  auto sweep = [&](const RadialProfile& prof, const std::string& label) {
    for (double c : {0.3, 0.4, 0.5, 0.6, 0.7}) {
      const double ratio = harnack_ratio(prof, c, 0.25);
      worst = std::max(worst, ratio);
      table.push_back({{"family", label}, {"center", c}, {"ratio", ratio}});
    }
  };
  for (double k : {1.0, 4.0, 16.0})
    sweep(evaluate_family(make_regular_flux(params, k), grid), "RegularFluxK");
  sweep(evaluate_family(make_strong_singular(params), grid), "StrongSingular");
  out.report["table"] = table;
  out.report["worst_ratio"] = worst;
  out.require(worst < 12.0, "Harnack ratio exceeded the recorded uniform bound");
  return out;
}

VerifyOutcome verify_liouville(const ProblemParams& params) {
  VerifyOutcome out;
  const std::pair<double, double> kms[] = {{1.0, 0.0}, {2.0, 0.5}, {4.0, 1.0}};
  const LiouvilleReport rep = liouville_check(params, kms);
  out.report["expected_decay"] = rep.expected_decay;
  ordered_json entries = ordered_json::array();
  const double ceiling = std::pow(coefficient_b(params), 1.0 / (params.q + 1.0 - params.p));
  for (const LiouvilleEntry& ent : rep.entries) {
    entries.push_back({{"k", ent.k},
                       {"M", ent.M},
                       {"decay_slope", ent.decay_fit.slope},
                       {"sup_product", ent.sup_product}});
    out.require(ent.sup_product <= ceiling * (1.0 + 1e-9),
                "gradient product exceeds the saturation ceiling");
  }
  out.report["entries"] = entries;
  ordered_json table = ordered_json::array();
  for (const auto& [R, g] : rep.grad_table) table.push_back({{"R", R}, {"max_grad", g}});
  out.report["grad_table"] = table;
  out.require(rep.decay_confirmed, "decay exponent misses -1/(q+1-p) by more than 1%");
  return out;
}

VerifyOutcome verify_sphere_constant(const ProblemParams& params) {
  VerifyOutcome out;
  const double residual = verify_constant_sphere_solution(params);
  out.report["residual"] = residual;
  out.report["lambda_tilde"] = lambda_tilde(params);
  out.require(std::fabs(residual) < 1e-12, "constant sphere residual above 1e-12");
  return out;
}

}  // namespace

int cmd_verify(const RunConfig& cfg, const std::string& which) {
  const ProblemParams params = params_from(cfg);
  const double R = cfg.get_double("geometry.R", 1.0);
  VerifyOutcome out;
  if (which == "gradient-bound") {
    out = verify_gradient_bound(params);
  } else if (which == "supersolution") {
    out = verify_supersolution(params, R);
  } else if (which == "supersolution-manifold") {
    out = verify_supersolution_manifold(params, R, cfg.get_double("curvature.B", 1.0),
                                        cfg.get_double("curvature.Btilde",
                                                       cfg.get_double("curvature.B", 1.0)));
  } else if (which == "harnack") {
    out = verify_harnack(params);
  } else if (which == "liouville") {
    out = verify_liouville(params);
  } else if (which == "sphere-constant") {
    out = verify_sphere_constant(params);
  } else {
    throw std::invalid_argument("unknown verify target '" + which + "'");
  }

  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["check"] = which;
  j["n"] = params.n;
  j["p"] = params.p;
  j["q"] = params.q;
  j["passed"] = out.failures.empty();
  j["failures"] = out.failures;
  j["report"] = out.report;
  emit(cfg, j.dump(2));
  return out.failures.empty() ? kExitOk : kExitNumerical;
}

int cmd_classify(const RunConfig& cfg, const std::string& input_csv) {
  const CsvProfile csv = read_profile_csv_file(input_csv);
  RunConfig merged = cfg;
  // CSV metadata provides parameters unless overridden on the command line.
  auto adopt = [&](const char* meta, const char* key) {
    const auto it = csv.metadata.find(meta);
    if (it != csv.metadata.end() && !merged.has(key)) merged.set(key, it->second);
  };
  adopt("n", "problem.n");
  adopt("p", "problem.p");
  adopt("q", "problem.q");
  const ProblemParams params = params_from(merged);
  const double lo = merged.get_double("window.lo", 1e-6);
  const double hi = merged.get_double("window.hi", 1e-3);
  const double tol = merged.get_double("tol", 0.05);
  const SingularityClassification c = classify(csv.profile, params, lo, hi, tol);
  emit(cfg, classification_json(c, params));
  return c.verdict == SingularityVerdict::Unclassified ? kExitInconclusive : kExitOk;
}

}  // namespace pgrad::cli
