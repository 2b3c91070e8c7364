#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdwave/semigroup.hpp"
#include "sdwave/spectral_domain.hpp"
#include "sdwave/state_space.hpp"

namespace sdwave {

/// Terminal interval [tau - delta, tau] on which the corrective control acts.
struct SteeringWindow {
  double horizon = 1.0;
  double length = 0.1;
  int nodes = 64;

  double start() const { return horizon - length; }
  bool contains(double t) const;

  /// Enforces 0 < delta < min(tau - t_p, r); last_impulse is t_p, or nullopt
  /// without impulses. Throws std::invalid_argument.
  void validate(double delay, std::optional<double> last_impulse) const;
};

/// Raised when alpha I + Q cannot be Cholesky-factored.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(const std::string& what, double min_eigenvalue)
      : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Q over a steering window, in energy coordinates [sqrt(lambda) w; v] so
/// that it is a symmetric matrix and the Z^{1/2} norm is Euclidean.
struct GramianData {
  Eigen::MatrixXd q;
  SteeringWindow window;
  std::vector<double> nodes;
  std::vector<double> weights;

  Eigen::Index modes() const { return q.rows() / 2; }
};

/// Eigenvalues of Q in ascending order.
Eigen::VectorXd gramian_spectrum(const GramianData& gramian);

/// Time profile of a modal control: zero, amplitude * e_mode, or
/// amplitude * sin(frequency t) * e_mode.
struct ControlProfile {
  enum class Kind { zero, constant, sine };

  Kind kind = Kind::zero;
  Eigen::Index mode = 0;
  double amplitude = 0.0;
  double frequency = 1.0;

  Eigen::VectorXd operator()(double t, Eigen::Index modes) const;
};

ControlProfile::Kind parse_control_kind(const std::string& name);

/// The linear pair (A, B) restricted to N modes: z' = A z + B u with
/// B u = (0, O u).
class LinearControlSystem {
 public:
  LinearControlSystem(SpectralBasis basis, const ModelParams& params, const ActuatorRegion& region);
  LinearControlSystem(SpectralBasis basis, const ModelParams& params, OverlapMatrix overlap);

  const SpectralBasis& basis() const { return basis_; }
  const OverlapMatrix& overlap() const { return overlap_; }
  const Semigroup& semigroup() const { return semigroup_; }
  const ModelParams& params() const { return semigroup_.params(); }
  Eigen::Index modes() const { return basis_.size(); }

  /// B u = (0, O u).
  ModalState input_map(const Eigen::VectorXd& u) const;

  /// (G* z)(t) = B* T*(tau - t) z = O (velocity of T*(tau - t) z).
  Eigen::VectorXd adjoint_map(const ModalState& z, double t, const SteeringWindow& window) const;

  /// G u = int_{tau-delta}^{tau} T(tau - s) B u(s) ds by Gauss-Legendre.
  ModalState controllability_map(const std::function<Eigen::VectorXd(double)>& u,
                                 const SteeringWindow& window) const;

  GramianData assemble_gramian(const SteeringWindow& window) const;

 private:
  SpectralBasis basis_;
  OverlapMatrix overlap_;
  Semigroup semigroup_;
};

/// Solves (alpha I + Q) x = rhs by Cholesky. Throws FactorizationError.
Eigen::VectorXd regularized_solve(const Eigen::MatrixXd& q, double alpha, const Eigen::VectorXd& rhs);
Eigen::VectorXd regularized_solve(const GramianData& gramian, double alpha,
                                  const Eigen::VectorXd& rhs);

/// alpha (alpha I + Q)^{-1} h, the part of h the regularized control misses.
Eigen::VectorXd steering_residual(const GramianData& gramian, double alpha,
                                  const Eigen::VectorXd& h_energy);
/// Z^{1/2} norm of steering_residual.
double steering_error(const GramianData& gramian, double alpha, const Eigen::VectorXd& h_energy);

/// Minimum-energy correction on the steering window:
///
///   u(t) = v(t) + B* T*(tau - t) (alpha I + Q)^{-1} (h - G v),
///   h = z1 - T(delta) z(tau - delta),
///
/// with v an optional auxiliary profile (v = 0 by default). Then
/// G u = h - alpha (alpha I + Q)^{-1} (h - G v).
class TailControl {
 public:
  TailControl(const LinearControlSystem& system, const GramianData& gramian,
              const ModalState& handoff, const ModalState& target, double alpha,
              std::optional<ControlProfile> auxiliary = std::nullopt);

  Eigen::VectorXd operator()(double t) const;

  double alpha() const { return alpha_; }
  const SteeringWindow& window() const { return window_; }
  /// h in energy coordinates.
  const Eigen::VectorXd& target_residual() const { return h_energy_; }
  /// (alpha I + Q)^{-1} (h - G v) in energy coordinates.
  const Eigen::VectorXd& solved() const { return solved_energy_; }
  const std::optional<ControlProfile>& auxiliary() const { return auxiliary_; }

 private:
  Semigroup semigroup_;
  OverlapMatrix overlap_;
  Eigen::VectorXd sqrt_lambda_;
  SteeringWindow window_;
  double alpha_;
  Eigen::VectorXd h_energy_;
  Eigen::VectorXd solved_energy_;
  ModalState solved_modal_;
  std::optional<ControlProfile> auxiliary_;
};

TailControl synthesize_tail(const LinearControlSystem& system, const GramianData& gramian,
                            const ModalState& handoff, const ModalState& target, double alpha,
                            std::optional<ControlProfile> auxiliary = std::nullopt);

/// Piecewise control: base profile on [0, tau - delta], synthesized tail after.
class ControlSignal {
 public:
  ControlSignal(ControlProfile base, Eigen::Index modes);

  ControlSignal with_tail(TailControl tail) const;

  /// Value at t; at the switch time the left limit is the base profile and
  /// the right limit the tail.
  Eigen::VectorXd operator()(double t, Side side = Side::right) const;

  Eigen::Index modes() const { return modes_; }
  const ControlProfile& base() const { return base_; }
  const std::optional<TailControl>& tail() const { return tail_; }
  bool has_tail() const { return tail_.has_value(); }
  /// tau - delta with a tail, +infinity otherwise.
  double switch_time() const;
  bool in_tail(double t, Side side) const;

 private:
  ControlProfile base_;
  Eigen::Index modes_;
  std::optional<TailControl> tail_;
};

}  // namespace sdwave
