#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgrad/run_config.hpp"

namespace pgrad::cli {

/// Exit-code contract: 0 success, 2 input error, 3 domain/numerical error,
/// 4 inconclusive classification.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitInconclusive = 4;

int cmd_constants(const RunConfig& cfg);
int cmd_family(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg, const std::string& which);
int cmd_classify(const RunConfig& cfg, const std::string& input_csv);

/// Verbosity from PGRAD_LOG (off | info | debug).
bool log_enabled();
void log_info(const std::string& msg);

}  // namespace pgrad::cli
