#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sdwave/controllability.hpp"
#include "sdwave/dynamics.hpp"
#include "sdwave/spectral_domain.hpp"
#include "sdwave/state_space.hpp"

namespace sdwave {

/// Named state profile used for the initial history and for the target.
///
///   zero           w = v = 0
///   sine_mode      w = A_w phi_m, v = A_v phi_m                (time independent)
///   standing_wave  w = A_w cos(omega s) phi_m, v = -A_w omega sin(omega s) phi_m
///   constant       w = A_w, v = A_v as spatially constant fields, projected on the basis
///   bump           w = A_w b(x), v = A_v b(x) with b = cos^2(pi (x - c) / (2 h)) on |x - c| < h
///   csv            samples read from a file (history only)
///
/// `mode` is 1-based as written in configs.
struct StateProfile {
  enum class Kind { zero, sine_mode, standing_wave, constant, bump, csv };

  Kind kind = Kind::zero;
  int mode = 1;
  double w_amplitude = 0.0;
  double v_amplitude = 0.0;
  double frequency = 0.0;
  double center = 0.5 * 3.141592653589793;  // bump centre c
  double width = 0.5;                        // bump half-width h
  std::filesystem::path file;

  /// Profile value at s; not available for csv profiles.
  ModalState at(double s, const SpectralBasis& basis) const;
};

StateProfile::Kind parse_profile_kind(std::string_view name);
std::string to_string(StateProfile::Kind kind);

struct SweepSpec {
  std::vector<double> alphas;
  std::vector<double> deltas;
  std::filesystem::path output_dir = ".";
  std::optional<double> epsilon;           // target accuracy, reported only
  std::optional<ControlProfile> auxiliary;  // v in the tail formula
  int threads = 1;
};

struct ExperimentConfig {
  ModelParams model;
  DomainSpec domain;
  int modes = 8;
  ActuatorRegion actuator;
  NonlinearitySpec nonlinearity;
  MemoryKernel kernel;
  ImpulseSchedule impulses;
  StateProfile history;
  StateProfile target;
  ControlProfile base_control;
  SolverConfig solver;
  int gramian_nodes = 64;
  SweepSpec sweep;

  /// Directory relative paths in the config resolve against.
  std::filesystem::path base_dir = ".";
};

/// Malformed TOML, unknown keys or names, wrong value types.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(std::string_view text, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

/// Reads a history CSV with columns s, w_1..w_N, v_1..v_N (header optional)
/// into samples ordered from s = -r to s = 0.
std::vector<ModalState> read_history_csv(const std::filesystem::path& path, Eigen::Index modes);

}  // namespace sdwave
