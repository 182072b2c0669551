// io.cpp

#include "hyperch/io.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hyperch/error.hpp"

namespace hyperch {

using nlohmann::ordered_json;

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256: digest failed");
  std::string out;
  char hex[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(hex, sizeof hex, "%02x", digest[i]);
    out += hex;
  }
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  if (!out) throw IoError(path.string(), "write failed");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string(), "missing or unreadable");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

// nlohmann prints the shortest round-trip form; non-finite becomes null.
ordered_json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

void write_manifest(const std::filesystem::path& dir, const std::string& command,
                    const ExperimentConfig& cfg, const std::vector<std::string>& files) {
  const std::string text = serialize_config(cfg);
  ordered_json j;
  j["artifact"] = "hyperch";
  j["version"] = artifact_version;
  j["command"] = command;
  j["config_sha256"] = sha256_hex(text);
  j["config"] = text;
  j["files"] = files;
  write_text(dir / "manifest.json", j.dump(2) + "\n");
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj,
                          const std::string& tag, const DomainSpec& domain) {
  ordered_json header;
  header["tag"] = tag;
  header["tau"] = num(traj.tau);
  header["dim"] = domain.dim;
  header["modes"] = {domain.modes[0], domain.modes[1]};
  header["lengths"] = {num(domain.lengths[0]), num(domain.lengths[1])};
  header["basis"] = "orthonormal Neumann cosines, flat index k1*modes[1]+k2";

  std::ostringstream os;
  os << "# " << header.dump() << "\n";
  const std::size_t n = domain.mode_count();
  os << "t";
  for (std::size_t k = 0; k < n; ++k) os << ",phi_" << k;
  if (traj.has_rho())
    for (std::size_t k = 0; k < n; ++k) os << ",rho_" << k;
  os << "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    os << format_number(traj.times[i]);
    for (double c : traj.phi[i].coeffs) os << "," << format_number(c);
    if (traj.has_rho())
      for (double c : traj.rho[i].coeffs) os << "," << format_number(c);
    os << "\n";
  }
  write_text(path, os.str());
}

void write_monitors_csv(const std::filesystem::path& path, const Trajectory& traj) {
  std::ostringstream os;
  os << "t,energy,willmore,ginzburg_landau,phi_vstar,phi_w,rho_vstar,lyapunov\n";
  for (const auto& m : traj.monitors) {
    os << format_number(m.t) << "," << format_number(m.energy) << ","
       << format_number(m.willmore) << "," << format_number(m.ginzburg_landau) << ","
       << format_number(m.phi_vstar) << "," << format_number(m.phi_w) << ","
       << format_number(m.rho_vstar) << "," << format_number(m.lyapunov) << "\n";
  }
  write_text(path, os.str());
}

void write_stability_json(const std::filesystem::path& path, const StabilityReport& report,
                          double tau, double mu_integral) {
  ordered_json j;
  j["tau"] = num(tau);
  const auto v = report.values();
  for (std::size_t i = 0; i < v.size(); ++i)
    j[std::string(StabilityReport::field_names[i])] = num(v[i]);
  j["mu_time_integral_V"] = num(mu_integral);
  write_text(path, j.dump(2) + "\n");
}

void write_errors_csv(const std::filesystem::path& path, const std::vector<SweepEntry>& entries) {
  std::ostringstream os;
  os << "tau";
  for (auto name : ErrorReport::field_names) os << "," << name;
  os << "\n";
  for (const auto& e : entries) {
    os << format_number(e.tau);
    for (double v : e.errors.values()) os << "," << format_number(v);
    os << "\n";
  }
  write_text(path, os.str());
}

void write_ratefit_json(const std::filesystem::path& path, const SweepResult& result) {
  ordered_json j;
  ordered_json fits;
  for (std::size_t f = 0; f < 4; ++f) {
    const auto& fit = result.fits[f];
    ordered_json e;
    e["slope"] = num(fit.slope);
    e["intercept"] = num(fit.intercept);
    e["r_squared"] = num(fit.r_squared);
    fits[std::string(ErrorReport::field_names[f])] = e;
  }
  j["fits"] = fits;
  ordered_json checks;
  checks["quadrature_rel_change"] = num(result.quadrature_rel_change);
  ordered_json ref;
  for (std::size_t f = 0; f < 4; ++f)
    ref[std::string(ErrorReport::field_names[f])] = num(result.reference_error_estimate[f]);
  checks["reference_error_estimate"] = ref;
  j["checks"] = checks;
  ordered_json stab = ordered_json::array();
  for (const auto& e : result.entries) {
    ordered_json s;
    s["tau"] = num(e.tau);
    const auto v = e.stability.values();
    for (std::size_t i = 0; i < v.size(); ++i)
      s[std::string(StabilityReport::field_names[i])] = num(v[i]);
    s["mu_time_integral_V"] = num(e.mu_integral);
    stab.push_back(s);
  }
  j["stability"] = stab;
  write_text(path, j.dump(2) + "\n");
}

std::vector<ErrorRow> read_errors_csv(const std::filesystem::path& path) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line) || line.rfind("tau,", 0) != 0)
    throw IoError(path.string(), "corrupt errors table (bad header)");
  std::vector<ErrorRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<double> cells;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        cells.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw IoError(path.string(), "corrupt value '" + cell + "' on line " +
                                         std::to_string(lineno));
      }
    }
    if (cells.size() != 5)
      throw IoError(path.string(), "expected 5 columns on line " + std::to_string(lineno));
    rows.push_back({cells[0], {cells[1], cells[2], cells[3], cells[4]}});
  }
  return rows;
}

}  // namespace hyperch
