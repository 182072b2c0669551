// config.hpp
// Experiment configuration: YAML text <-> ExperimentConfig, and builders for
// the domain, potential, system and initial data it describes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyperch/galerkin.hpp"
#include "hyperch/integrators.hpp"

namespace hyperch {

/// Initial-data descriptor. `coefficients` are on the orthonormal basis
/// (flat order); `cosines` use the raw amplitude * cos(k pi x / L) convention;
/// `random` draws amplitude * U(-1, 1) / (1 + lambda_k)^decay per mode.
struct InitialData {
  enum class Kind { zero, cosines, coefficients, random };
  struct Cosine {
    MultiIndex k{0, 0};
    double amplitude = 0.0;
    bool operator==(const Cosine&) const = default;
  };

  Kind kind = Kind::zero;
  std::vector<Cosine> cosines;
  std::vector<double> coefficients;
  double amplitude = 0.0;
  double decay = 2.0;

  bool operator==(const InitialData&) const = default;
};

struct ForcingConfig {
  enum class Kind { zero, constant };
  Kind kind = Kind::zero;
  double value = 0.0;
  bool operator==(const ForcingConfig&) const = default;
};

/// Where each top-level key came from; ignored by equality.
struct SourceLines {
  std::map<std::string, int> at;
  int line(const std::string& key) const;
  bool operator==(const SourceLines&) const { return true; }
};

struct ExperimentConfig {
  struct Domain {
    int dim = 1;
    std::vector<double> lengths{1.0};
    std::vector<int> modes{16};
    std::vector<int> grid{0};      // 0: default padding
    std::vector<int> retained{0};  // 0: all modes
    bool dealias = true;
    bool operator==(const Domain&) const = default;
  };
  struct Potential {
    std::vector<BetaTerm> beta_coeffs{{3, 1.0}};  // (degree, coefficient) pairs
    double lambda = 1.0;
    double nu = 1.0;
    double sigma = 0.1;
    bool diagnostic = false;
    bool operator==(const Potential&) const = default;
  };
  struct Reference {
    Scheme scheme = Scheme::imex2_parabolic;
    double dt = 2e-5;
    bool operator==(const Reference&) const = default;
  };

  Domain domain;
  Potential potential;
  std::optional<double> tau;
  std::vector<double> tau_list;
  Scheme scheme = Scheme::imex1_parabolic;
  double dt = 1e-4;
  double T = 1.0;
  double save_every = 1e-2;
  Reference reference;
  InitialData phi0;
  InitialData rho0;
  ForcingConfig forcing;
  std::string output = "results";
  std::string tag = "main";
  std::uint64_t seed = 0;
  SourceLines lines;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parses and validates; throws ConfigError naming the field and line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical YAML with 17 significant digits; parse_config inverts it.
std::string serialize_config(const ExperimentConfig& cfg);

DomainSpec build_domain(const ExperimentConfig& cfg);
PotentialSpec build_potential(const ExperimentConfig& cfg);
ForcingSpec build_forcing(const ExperimentConfig& cfg);
GalerkinSystem build_system(const ExperimentConfig& cfg);
/// `stream` separates the random draws of phi0 and rho0 under one seed.
SpectralField build_initial(const InitialData& data, const DomainSpec& d, std::uint64_t seed,
                            std::uint64_t stream);

}  // namespace hyperch
