#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <random>
#include <sstream>

#include "hyperch/commands.hpp"
#include "hyperch/io.hpp"

using namespace hyperch;
namespace fs = std::filesystem;

namespace {

class TempDir {
 public:
  TempDir() {
    std::random_device rd;
    path_ = fs::temp_directory_path() / ("hyperch_test_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }
  fs::path operator/(const std::string& s) const { return path_ / s; }

 private:
  fs::path path_;
};

const char* kSimulate = R"(domain: {dim: 1, lengths: [6.283185307179586], modes: [16]}
tau: 0.05
scheme: imex1_hyperbolic
dt: 1.0e-3
T: 0.05
save_every: 1.0e-2
phi0:
  cosines: [{k: [2], amplitude: 0.2}]
rho0:
  random: {amplitude: 0.05, decay: 1}
seed: 7
)";

const char* kSweep = R"(domain: {dim: 1, lengths: [6.283185307179586], modes: [16]}
tau_list: [0.125, 0.0625, 0.03125, 0.015625]
scheme: imex1_hyperbolic
dt: 1.0e-4
T: 0.05
save_every: 1.0e-3
reference: {scheme: imex2_parabolic, dt: 1.0e-4}
phi0:
  cosines: [{k: [2], amplitude: 0.2}]
rho0:
  cosines: [{k: [2], amplitude: 0.1}]
)";

int count_lines(const std::string& text) {
  return static_cast<int>(std::count(text.begin(), text.end(), '\n'));
}

}  // namespace

TEST(Simulate, ZeroDataGivesZeroTrajectory) {
  TempDir tmp;
  const auto cfg = parse_config("domain: {modes: [8]}\ntau: 0\ndt: 1.0e-2\nT: 0.1\nsave_every: 5.0e-2\n");
  std::ostringstream out, err;
  ASSERT_EQ(simulate(cfg, tmp.path(), out, err), 0) << err.str();
  for (const char* f : {"manifest.json", "trajectory_main.csv", "monitors.csv", "stability.json"})
    EXPECT_TRUE(fs::exists(tmp / f)) << f;
  std::istringstream csv(read_text(tmp / "trajectory_main.csv"));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("# {", 0), 0u);
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("t,phi_0", 0), 0u);
  int rows = 0;
  while (std::getline(csv, line)) {
    ++rows;
    std::istringstream row(line);
    std::string cell;
    std::getline(row, cell, ',');
    while (std::getline(row, cell, ',')) EXPECT_EQ(std::stod(cell), 0.0);
  }
  EXPECT_EQ(rows, 3);
  const auto manifest = nlohmann::json::parse(read_text(tmp / "manifest.json"));
  EXPECT_EQ(manifest["version"], artifact_version);
  EXPECT_EQ(manifest["config_sha256"], sha256_hex(manifest["config"].get<std::string>()));
}

TEST(Simulate, RerunIsByteIdentical) {
  TempDir a, b;
  const auto cfg = parse_config(kSimulate);
  std::ostringstream out, err;
  ASSERT_EQ(simulate(cfg, a.path(), out, err), 0) << err.str();
  ASSERT_EQ(simulate(cfg, b.path(), out, err), 0) << err.str();
  for (const char* f : {"trajectory_main.csv", "monitors.csv", "stability.json", "manifest.json"})
    EXPECT_EQ(read_text(a / f), read_text(b / f)) << f;
}

TEST(Simulate, GuardViolationExitsNonzero) {
  TempDir tmp;
  const auto cfg = parse_config(R"(domain: {lengths: [6.283185307179586], modes: [8]}
potential: {beta_coeffs: [[3, 1]], lambda: 2, nu: 3, sigma: 0.1}
tau: 0
scheme: imex1_parabolic
dt: 5
T: 10
save_every: 5
phi0: {cosines: [{k: [1], amplitude: 0.1}]}
)");
  std::ostringstream out, err;
  EXPECT_NE(simulate(cfg, tmp.path(), out, err), 0);
  EXPECT_NE(err.str().find("positivity guard"), std::string::npos) << err.str();
}

TEST(SweepTau, FourTausGiveFourRowsAndFits) {
  TempDir tmp;
  const auto cfg = parse_config(kSweep);
  std::ostringstream out, err;
  ASSERT_EQ(sweep_tau(cfg, tmp.path(), 2, out, err), 0) << err.str();
  const auto rows = read_errors_csv(tmp / "errors.csv");
  ASSERT_EQ(rows.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(rows[i].tau, cfg.tau_list[i]);
  const auto fit = nlohmann::json::parse(read_text(tmp / "ratefit.json"));
  EXPECT_EQ(fit["fits"].size(), 4u);
  EXPECT_TRUE(fs::exists(tmp / "manifest.json"));
}

TEST(SweepTau, RequiresHyperbolicScheme) {
  TempDir tmp;
  auto cfg = parse_config(kSweep);
  cfg.scheme = Scheme::imex1_parabolic;
  std::ostringstream out, err;
  EXPECT_NE(sweep_tau(cfg, tmp.path(), 1, out, err), 0);
}

TEST(Verify, DefaultRunPasses) {
  TempDir tmp;
  std::ostringstream out, err;
  EXPECT_EQ(verify(VerifyOptions{}, tmp.path(), out, err), 0) << out.str() << err.str();
  EXPECT_EQ(count_lines(out.str()), static_cast<int>(verify_check_names().size()));
  const auto j = nlohmann::json::parse(read_text(tmp / "verify.json"));
  EXPECT_EQ(j.size(), verify_check_names().size());
}

TEST(Verify, InjectedFaultFails) {
  VerifyOptions opts;
  opts.inject_sign_fault = true;
  std::ostringstream out, err;
  EXPECT_NE(verify(opts, std::nullopt, out, err), 0);
  const auto results = run_verify(opts);
  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  EXPECT_GE(failed, 1);
  bool remainder_failed = false;
  for (const auto& r : results)
    if (r.name == "nonlinear_remainder_consistency") remainder_failed = !r.passed;
  EXPECT_TRUE(remainder_failed);
}

TEST(Verify, CheckNamesAreUnique) {
  auto names = verify_check_names();
  EXPECT_GE(names.size(), 10u);
  std::sort(names.begin(), names.end());
  EXPECT_EQ(std::adjacent_find(names.begin(), names.end()), names.end());
}

TEST(Report, EmptyDirNamesMissingManifest) {
  TempDir tmp;
  std::ostringstream out, err;
  EXPECT_NE(report({tmp.path()}, std::nullopt, out, err), 0);
  EXPECT_NE(err.str().find("manifest"), std::string::npos) << err.str();
}

TEST(Report, SweepDirsGiveTables) {
  TempDir a, b, rep;
  const auto cfg = parse_config(kSweep);
  std::ostringstream out, err;
  ASSERT_EQ(sweep_tau(cfg, a.path(), 1, out, err), 0) << err.str();
  auto zero_rho = cfg;
  zero_rho.rho0 = InitialData{};
  ASSERT_EQ(sweep_tau(zero_rho, b.path(), 1, out, err), 0) << err.str();

  std::ostringstream one;
  ASSERT_EQ(report({a.path()}, rep.path(), one, err), 0) << err.str();
  for (double tau : cfg.tau_list) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", tau);
    EXPECT_NE(one.str().find(buf), std::string::npos) << buf;
  }
  EXPECT_TRUE(fs::exists(rep / "report.csv"));
  EXPECT_EQ(count_lines(read_text(rep / "report.csv")), 5);

  std::ostringstream two;
  ASSERT_EQ(report({a.path(), b.path()}, std::nullopt, two, err), 0) << err.str();
  EXPECT_NE(two.str().find(a.path().filename().string()), std::string::npos);
  EXPECT_NE(two.str().find(b.path().filename().string()), std::string::npos);
}

TEST(Report, SimulateDirGivesStability) {
  TempDir a;
  std::ostringstream out, err;
  ASSERT_EQ(simulate(parse_config(kSimulate), a.path(), out, err), 0);
  std::ostringstream rep;
  ASSERT_EQ(report({a.path()}, std::nullopt, rep, err), 0) << err.str();
  EXPECT_NE(rep.str().find("phi_H1Vstar"), std::string::npos);
}
