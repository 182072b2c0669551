// commands.hpp
// The four batch commands behind the hyperch tool. Each returns a process
// exit status and writes diagnostics to `err`.

#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hyperch/config.hpp"

namespace hyperch {

/// Single-tau run: trajectory, monitors, stability report and manifest.
int simulate(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, std::ostream& out,
             std::ostream& err);

/// Reference run plus one relaxed run per tau_list entry; errors.csv and ratefit.json.
int sweep_tau(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, int jobs,
              std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::optional<ExperimentConfig> config;  // domain and potential for the identity checks
  bool inject_sign_fault = false;          // negate N(phi) in every system under test
};

std::vector<std::string> verify_check_names();
std::vector<CheckResult> run_verify(const VerifyOptions& opts);
/// Prints one "PASS|FAIL name detail" line per check; nonzero exit if any fails.
int verify(const VerifyOptions& opts, const std::optional<std::filesystem::path>& out_dir,
           std::ostream& out, std::ostream& err);

/// Summarizes one or more result directories; optional report.csv into out_dir.
int report(const std::vector<std::filesystem::path>& dirs,
           const std::optional<std::filesystem::path>& out_dir, std::ostream& out,
           std::ostream& err);

}  // namespace hyperch
