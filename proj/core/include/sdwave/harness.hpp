#pragma once

#include <cstddef>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sdwave/config.hpp"
#include "sdwave/controllability.hpp"
#include "sdwave/dynamics.hpp"

namespace sdwave {

struct Violation {
  std::string hypothesis;  // the modelling assumption that is broken
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(ValidationReport report);
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

struct ValidationOptions {
  /// Require non-empty alpha and delta lists (sweeps need them; single runs do not).
  bool require_sweep = true;
  /// Windows supplied outside the config, e.g. on the command line.
  std::vector<double> extra_deltas;
  std::vector<double> extra_alphas;
  int growth_probes = 4096;
};

/// Collects every violated hypothesis instead of stopping at the first.
ValidationReport validate_config(const ExperimentConfig& config, const ValidationOptions& options = {});

/// One (alpha, delta) steering experiment.
struct SteeringRow {
  double alpha = 0.0;
  double delta = 0.0;
  double final_error = 0.0;             // |z(tau) - z1|
  double linear_residual = 0.0;         // |alpha (alpha I + Q)^{-1} (h - G v)|
  double nonlinear_perturbation = 0.0;  // |z(tau) - y(tau)|
  double uncontrolled_error = 0.0;      // |z_base(tau) - z1|, same phase-1 state
  double target_residual = 0.0;         // |h|
  double q_min = 0.0;
  std::size_t handoff_index = 0;
  std::optional<std::size_t> max_delayed_index_in_tail;
  std::string status = "ok";

  double phase1_seconds = 0.0;
  double gramian_seconds = 0.0;
  double tail_seconds = 0.0;

  bool ok() const { return status == "ok"; }
};

struct SteeringReport {
  std::vector<SteeringRow> rows;
  std::optional<double> epsilon;

  bool all_ok() const;
};

/// Full output of a single steering run, for callers that need the states.
struct SteeringRun {
  SteeringRow row;
  Trajectory trajectory;       // piecewise control over [0, tau]
  Trajectory uncontrolled;     // base control continued over the tail
  ModalState linear_prediction;  // y(tau) = T(delta) z(tau - delta) + G(tail)
  ModalState target;
};

/// A validated configuration with its simulator, plus per-delta caches of
/// the phase-1 trajectory and the Gramian.
///
/// Steering follows three phases. Phase 1 runs the base control up to
/// tau - delta. Phase 2 assembles Q on [tau - delta, tau] and synthesizes the
/// tail from the handoff state. Phase 3 continues a copy of the phase-1
/// trajectory under the tail. Rows with equal delta share one phase-1 run.
class Experiment {
 public:
  explicit Experiment(ExperimentConfig config, const ValidationOptions& options = {false, {}, {}, 4096});

  const ExperimentConfig& config() const { return config_; }
  const Simulator& simulator() const { return *simulator_; }
  const SpectralBasis& basis() const { return simulator_->basis(); }
  const ModalState& target() const { return target_; }
  ControlSignal base_control() const;

  /// Base control over the full horizon, no steering.
  Trajectory simulate() const;

  const GramianData& gramian(double delta) const;
  SteeringRun steer(double alpha, double delta) const;

  /// As steer, but failures land in the row status instead of propagating.
  SteeringRow run_steering(double alpha, double delta) const;

  /// Every (alpha, delta) pair of the config, grouped by delta.
  SteeringReport sweep() const;

  SteeringWindow window(double delta) const;

 private:
  struct PhaseOne {
    Trajectory handoff;       // base control up to tau - delta
    Trajectory uncontrolled;  // the same run continued to tau
    double seconds = 0.0;
  };
  struct GramianEntry {
    GramianData data;
    double q_min = 0.0;
    double seconds = 0.0;
  };

  std::size_t delta_key(double delta) const;
  const PhaseOne& phase_one(double delta) const;
  const GramianEntry& gramian_entry(double delta) const;

  template <typename T, typename Fn>
  const T& cached(std::map<std::size_t, std::shared_future<std::shared_ptr<const T>>>& cache,
                  std::size_t key, Fn&& compute) const;

  ExperimentConfig config_;
  std::unique_ptr<Simulator> simulator_;
  ModalState target_;

  mutable std::mutex mutex_;
  mutable std::map<std::size_t, std::shared_future<std::shared_ptr<const PhaseOne>>> phase_cache_;
  mutable std::map<std::size_t, std::shared_future<std::shared_ptr<const GramianEntry>>> gramian_cache_;
};

/// Builds the history segment described by the config on the solver grid.
HistorySegment build_history(const ExperimentConfig& config, const SpectralBasis& basis);

/// Gronwall-type a-priori bound E_n >= |z(t_n)| for a run whose control obeys
/// |u(t)| <= control_bound. With M0 = max |T(t)| on the grid it iterates
///
///   E_{n+1} = E_n + M0 dt (a~ max(H, E_{n+1-lag}) + b~ + |M|_inf t sup|g| sqrt(L) + control_bound)
///
/// where a~ = a0 max(1, lambda_1^{-1/2}), b~ = b0 sqrt(L), H bounds the history, and each impulse
/// adds M0 sup|I_k| sqrt(L).
std::vector<double> growth_envelope(const Simulator& simulator, double control_bound = 0.0);

}  // namespace sdwave
