#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "pgrad/bounds.hpp"
#include "pgrad/manifold.hpp"
#include "pgrad/params.hpp"
#include "pgrad/radial_families.hpp"
#include "pgrad/singularity.hpp"

namespace pgrad {

inline constexpr int kSchemaVersion = 1;

/// Shortest decimal representation that round-trips the double exactly.
std::string format_double(double v);

/// CSV schema: '#'-prefixed key=value comment lines (schema_version, family
/// metadata), a literal "r,u,du" header, then full-precision rows.
void write_profile_csv(const RadialProfile& profile, std::ostream& os);
std::string profile_to_csv(const RadialProfile& profile);

struct CsvProfile {
  RadialProfile profile;
  std::map<std::string, std::string> metadata;
};

/// Parses the CSV schema back; malformed input raises std::invalid_argument
/// carrying the offending line number.
CsvProfile read_profile_csv(std::istream& is);
CsvProfile read_profile_csv_file(const std::filesystem::path& path);

/// JSON records (schema_version field included, keys in insertion order).
std::string constants_record_json(const ProblemParams& params);
std::string profile_metadata_json(const RadialProfile& profile);
std::string classification_json(const SingularityClassification& c, const ProblemParams& params);
std::string supersolution_report_json(const SupersolutionReport& rep, bool include_grid = false);
std::string residual_grid_csv(const SupersolutionReport& rep);

/// Writes via a temp file in the same directory plus rename, so readers never
/// observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace pgrad
