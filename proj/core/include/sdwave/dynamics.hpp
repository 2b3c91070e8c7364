#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdwave/controllability.hpp"
#include "sdwave/nonlinearity.hpp"
#include "sdwave/state_space.hpp"

namespace sdwave {

/// M(t, s) = m0 (constant) or m0 exp(-kappa (t - s)) (exponential).
struct MemoryKernel {
  enum class Kind { constant, exponential };

  Kind kind = Kind::constant;
  double m0 = 0.0;
  double kappa = 0.0;

  double operator()(double t, double s) const;
  /// Essential bound of |M| on [0, tau]^2.
  double bound() const { return std::abs(m0); }
  bool is_zero() const { return m0 == 0.0; }
  /// M(t + dt, s) = decay(dt) M(t, s).
  double decay(double dt) const;
};

MemoryKernel::Kind parse_kernel_kind(const std::string& name);

enum class MemoryQuadrature { direct, recursive };

struct SolverConfig {
  double dt = 1e-3;
  MemoryQuadrature memory = MemoryQuadrature::direct;
  /// Gauss-Legendre nodes per step for the control term; 0 folds the control
  /// into the trapezoid forcing instead.
  int control_nodes = 4;
};

struct NonlinearitySpec {
  ForcingTerm f;
  MemoryResponse g;
};

/// Thrown when the state stops being finite.
class SolverAbort : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exponential trapezoid integrator for
///
///   z' = A z + B u + int_0^t M(t, s) (0, g(w(s - r))) ds + (0, f(t, z(t - r), u(t)))
///
/// with velocity jumps at the impulse times. The linear part is propagated
/// exactly by the modal block exponentials; the delayed forcing F is handled
/// by z_{n+1} = E (z_n + dt/2 F_n) + dt/2 F_{n+1}, where F_{n+1} uses only
/// states at or before t_{n+1} - r. The control term is integrated per step
/// by Gauss-Legendre against T(t_{n+1} - s).
class Simulator {
 public:
  Simulator(LinearControlSystem system, NonlinearitySpec nonlinearity, MemoryKernel kernel,
            ImpulseSchedule impulses, HistorySegment history, SolverConfig solver);

  const LinearControlSystem& system() const { return system_; }
  const SpectralBasis& basis() const { return system_.basis(); }
  const ModelParams& params() const { return system_.params(); }
  const NonlinearitySpec& nonlinearity() const { return nonlinearity_; }
  const MemoryKernel& kernel() const { return kernel_; }
  const ImpulseSchedule& impulses() const { return impulses_; }
  const HistorySegment& history() const { return history_; }
  const SolverConfig& solver() const { return solver_; }
  std::size_t horizon_steps() const { return horizon_steps_; }

  /// Trajectory holding z(0) = Phi(0).
  Trajectory start() const;

  /// Advances by one dt; applies the impulse if the new time is some t_k.
  void step(Trajectory& trajectory, const ControlSignal& control) const;

  /// Steps until t_end (a grid time no later than tau).
  void advance(Trajectory& trajectory, const ControlSignal& control, double t_end) const;

  Trajectory run(const ControlSignal& control) const;

  /// Composite trapezoid of int_0^{t_n} M(t_n, s) g(w(s - r)) ds in modal
  /// coefficients, evaluated from scratch.
  Eigen::VectorXd memory_term(const Trajectory& trajectory, std::size_t n) const;

  /// Modal coefficients of the pointwise f(t, w, v, u).
  Eigen::VectorXd forcing_coefficients(double t, const ModalState& delayed,
                                       const Eigen::VectorXd& u) const;
  /// Modal coefficients of the pointwise g(w).
  Eigen::VectorXd memory_response(const ModalState& delayed) const;
  /// Modal coefficients of I_k(t_k, w, v, u).
  Eigen::VectorXd impulse_coefficients(std::size_t k, const ModalState& state,
                                       const Eigen::VectorXd& u) const;

 private:
  /// z(t_m - r) as seen from grid index m.
  const ModalState& delayed(const Trajectory& trajectory, std::size_t m, Side side) const;
  const Eigen::VectorXd& cached_memory_sample(Trajectory& trajectory, std::size_t m) const;
  Eigen::VectorXd next_memory_integral(Trajectory& trajectory, std::size_t n) const;

  LinearControlSystem system_;
  NonlinearitySpec nonlinearity_;
  MemoryKernel kernel_;
  ImpulseSchedule impulses_;
  HistorySegment history_;
  SolverConfig solver_;
  std::size_t horizon_steps_ = 0;
  std::vector<std::size_t> impulse_steps_;

  std::vector<Eigen::Matrix2d> step_blocks_;
  std::vector<double> control_offsets_;                   // node offsets within a step
  std::vector<double> control_weights_;
  std::vector<std::vector<Eigen::Matrix2d>> node_blocks_;  // T(t_{n+1} - s_q) per node
};

}  // namespace sdwave
