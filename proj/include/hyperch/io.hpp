// io.hpp
// Result files: manifest.json, trajectory_<tag>.csv, monitors.csv,
// stability.json, errors.csv, ratefit.json. Numbers are printed with 17
// significant digits so reruns compare byte for byte.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hyperch/config.hpp"
#include "hyperch/lab.hpp"

namespace hyperch {

inline constexpr const char* artifact_version = "0.1.0";

std::string format_number(double x);
std::string sha256_hex(const std::string& data);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// Records the command, the canonical config text and its hash, and the files written.
void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const ExperimentConfig& cfg, const std::vector<std::string>& files);

/// First line "# {json header}", then "t,phi_0,...[,rho_0,...]" and one row per sample.
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          const std::string& tag, const DomainSpec& domain);
void write_monitors_csv(const std::filesystem::path& path, const Trajectory& traj);
void write_stability_json(const std::filesystem::path& path, const StabilityReport& report,
                          double tau, double mu_integral);
void write_errors_csv(const std::filesystem::path& path, const std::vector<SweepEntry>& entries);
void write_ratefit_json(const std::filesystem::path& path, const SweepResult& result);

struct ErrorRow {
  double tau = 0.0;
  std::array<double, 4> values{};
};
std::vector<ErrorRow> read_errors_csv(const std::filesystem::path& path);

}  // namespace hyperch
