#include "pgrad/profile_io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace pgrad {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

void append_family_metadata(std::ostream& os, const FamilyDescriptor& fam) {
  os << "# family=" << to_string(fam.kind) << " n=" << fam.params.n
     << " p=" << format_double(fam.params.p) << " q=" << format_double(fam.params.q);
  if (fam.k) os << " k=" << format_double(*fam.k);
  if (fam.M) os << " M=" << format_double(*fam.M);
  if (fam.eps) os << " eps=" << format_double(*fam.eps);
  os << "\n";
}

double parse_double_strict(const std::string& tok, size_t line_no, const char* what) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    std::ostringstream os;
    os << "line " << line_no << ": malformed " << what << " '" << tok << "'";
    throw std::invalid_argument(os.str());
  }
  return v;
}

}  // namespace

void write_profile_csv(const RadialProfile& profile, std::ostream& os) {
  os << "# schema_version=" << kSchemaVersion << "\n";
  if (profile.family) append_family_metadata(os, *profile.family);
  os << "r,u,du\n";
  for (size_t i = 0; i < profile.r.size(); ++i)
    os << format_double(profile.r[i]) << ',' << format_double(profile.u[i]) << ','
       << format_double(profile.du[i]) << "\n";
}

std::string profile_to_csv(const RadialProfile& profile) {
  std::ostringstream os;
  write_profile_csv(profile, os);
  return os.str();
}

CsvProfile read_profile_csv(std::istream& is) {
  CsvProfile out;
  std::string line;
  size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ls(line.substr(1));
      std::string tok;
      while (ls >> tok) {
        const size_t eq = tok.find('=');
        if (eq != std::string::npos)
          out.metadata[tok.substr(0, eq)] = tok.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "r,u,du") {
        std::ostringstream os;
        os << "line " << line_no << ": expected header 'r,u,du', got '" << line << "'";
        throw std::invalid_argument(os.str());
      }
      header_seen = true;
      continue;
    }
    std::string cols[3];
    size_t start = 0;
    for (int c = 0; c < 3; ++c) {
      const size_t comma = line.find(',', start);
      if (c < 2) {
        if (comma == std::string::npos) {
          std::ostringstream os;
          os << "line " << line_no << ": expected 3 comma-separated values";
          throw std::invalid_argument(os.str());
        }
        cols[c] = line.substr(start, comma - start);
        start = comma + 1;
      } else {
        if (comma != std::string::npos) {
          std::ostringstream os;
          os << "line " << line_no << ": expected 3 comma-separated values";
          throw std::invalid_argument(os.str());
        }
        cols[c] = line.substr(start);
      }
    }
    const double r = parse_double_strict(cols[0], line_no, "r");
    const double u = parse_double_strict(cols[1], line_no, "u");
    const double du = parse_double_strict(cols[2], line_no, "du");
    if (!out.profile.r.empty() && !(r > out.profile.r.back())) {
      std::ostringstream os;
      os << "line " << line_no << ": r values must be strictly increasing";
      throw std::invalid_argument(os.str());
    }
    out.profile.r.push_back(r);
    out.profile.u.push_back(u);
    out.profile.du.push_back(du);
  }
  if (!header_seen) throw std::invalid_argument("line 1: missing 'r,u,du' header");
  if (out.profile.r.empty()) throw std::invalid_argument("CSV holds no data rows");
  out.profile.r_min = out.profile.r.front();
  out.profile.r_max = out.profile.r.back();
  return out;
}

CsvProfile read_profile_csv_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::invalid_argument("cannot open '" + path.string() + "'");
  return read_profile_csv(is);
}

// ---------------------------------------------------------------------------
// JSON records
// ---------------------------------------------------------------------------

std::string constants_record_json(const ProblemParams& params) {
  const Regime regime = classify_regime(params);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = params.n;
  j["p"] = params.p;
  j["q"] = params.q;
  j["q_c"] = regime.q_c;
  j["q_tilde"] = regime.q_tilde;
  j["q_star"] = q_star(params);
  j["beta_q"] = beta_q(params);
  j["b"] = coefficient_b(params);
  j["mu_p_flux_prefactor"] =
      params.p <= static_cast<double>(params.n) ? ordered_json(mu_p_flux_prefactor(params))
                                                : ordered_json(nullptr);
  try {
    j["lambda"] = lambda_singular(params);
  } catch (const RegimeError&) {
    j["lambda"] = nullptr;
  }
  try {
    j["lambda_tilde"] = lambda_tilde(params);
  } catch (const RegimeError&) {
    j["lambda_tilde"] = nullptr;
  }
  j["regime"] = to_string(regime.tag);
  j["at_critical"] = regime.at_critical;
  j["above_q_tilde"] = regime.above_tilde;
  return j.dump(2);
}

std::string profile_metadata_json(const RadialProfile& profile) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  if (profile.family) {
    const FamilyDescriptor& fam = *profile.family;
    j["family"] = to_string(fam.kind);
    j["n"] = fam.params.n;
    j["p"] = fam.params.p;
    j["q"] = fam.params.q;
    if (fam.k) j["k"] = *fam.k;
    if (fam.M) j["M"] = *fam.M;
    if (fam.eps) j["eps"] = *fam.eps;
  } else {
    j["family"] = nullptr;
  }
  j["samples"] = profile.r.size();
  j["r_first"] = profile.r.empty() ? 0.0 : profile.r.front();
  j["r_last"] = profile.r.empty() ? 0.0 : profile.r.back();
  return j.dump(2);
}

std::string classification_json(const SingularityClassification& c, const ProblemParams& params) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["n"] = params.n;
  j["p"] = params.p;
  j["q"] = params.q;
  j["verdict"] = to_string(c.verdict);
  j["k_hat"] = c.k_hat ? ordered_json(*c.k_hat) : ordered_json(nullptr);
  j["lambda_hat"] = c.lambda_hat ? ordered_json(*c.lambda_hat) : ordered_json(nullptr);
  j["fitted_exponent"] = c.fitted_exponent;
  j["window"] = {{"lo", c.window_lo}, {"hi", c.window_hi}};
  ordered_json diags = ordered_json::array();
  for (const auto& [name, fit] : c.diagnostics) {
    diags.push_back({{"name", name},
                     {"slope", fit.slope},
                     {"intercept", fit.intercept},
                     {"r_squared", fit.r_squared}});
  }
  j["diagnostics"] = diags;
  return j.dump(2);
}

std::string supersolution_report_json(const SupersolutionReport& rep, bool include_grid) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["lambda"] = rep.lambda;
  j["mu"] = rep.mu;
  j["R"] = rep.R;
  j["B"] = rep.B;
  j["Btilde"] = rep.Btilde;
  j["residual_min"] = rep.residual_min;
  j["endpoint_bracket"] = rep.endpoint_bracket;
  j["valid"] = rep.valid();
  j["constants"] = {{"C", rep.constants.C},
                    {"D", rep.constants.D},
                    {"theta", rep.constants.theta},
                    {"Theta", rep.constants.Theta}};
  if (include_grid) {
    j["r_grid"] = rep.r_grid;
    j["residual_grid"] = rep.residual_grid;
  }
  return j.dump(2);
}

std::string residual_grid_csv(const SupersolutionReport& rep) {
  std::ostringstream os;
  os << "# schema_version=" << kSchemaVersion << "\n";
  os << "# lambda=" << format_double(rep.lambda) << " mu=" << format_double(rep.mu)
     << " R=" << format_double(rep.R) << " B=" << format_double(rep.B)
     << " Btilde=" << format_double(rep.Btilde) << "\n";
  os << "r,residual\n";
  for (size_t i = 0; i < rep.r_grid.size(); ++i)
    os << format_double(rep.r_grid[i]) << ',' << format_double(rep.residual_grid[i]) << "\n";
  return os.str();
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
    os << content;
    os.flush();
    if (!os) throw std::runtime_error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace pgrad
