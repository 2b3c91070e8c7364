#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sdwave/nonlinearity.hpp"
#include "sdwave/spectral_domain.hpp"

namespace sdwave {

/// Damping eta, stiffness gamma, delay r and horizon tau.
struct ModelParams {
  double eta = 1.0;
  double gamma = 1.0;
  double delay = 0.3;
  double horizon = 1.0;

  /// Throws std::invalid_argument unless eta, gamma, r, tau > 0 and r < tau.
  void validate() const;
};

/// Modal coefficients (w, v) of a point of D(A^{1/2}) x L2.
struct ModalState {
  Eigen::VectorXd w;
  Eigen::VectorXd v;

  static ModalState zero(Eigen::Index n) {
    return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  }

  Eigen::Index size() const { return w.size(); }
  bool all_finite() const { return w.allFinite() && v.allFinite(); }

  ModalState& operator+=(const ModalState& other);
  ModalState& operator-=(const ModalState& other);
  ModalState& operator*=(double c);
};

ModalState operator+(ModalState a, const ModalState& b);
ModalState operator-(ModalState a, const ModalState& b);
ModalState operator*(double c, ModalState a);
bool operator==(const ModalState& a, const ModalState& b);

/// sqrt(sum lambda_k w_k^2 + sum v_k^2).
double z_half_norm(const ModalState& state, const SpectralBasis& basis);
double z_half_inner(const ModalState& a, const ModalState& b, const SpectralBasis& basis);

/// Energy coordinates [sqrt(lambda) w; v], in which the Z^{1/2} inner product
/// is the Euclidean one.
Eigen::VectorXd to_energy(const ModalState& state, const SpectralBasis& basis);
ModalState from_energy(const Eigen::VectorXd& energy, const SpectralBasis& basis);

/// Number of dt steps in `duration` when it is an exact multiple (relative
/// tolerance 1e-9), std::nullopt otherwise.
std::optional<std::size_t> grid_steps(double duration, double dt);

/// Initial history Phi sampled on s = -r + i dt, i = 0..r/dt.
class HistorySegment {
 public:
  enum class Interpolation { grid_exact };

  HistorySegment(double delay, double dt, std::vector<ModalState> samples);

  static HistorySegment from_profile(double delay, double dt,
                                     const std::function<ModalState(double)>& profile);

  double delay() const { return delay_; }
  double dt() const { return dt_; }
  std::size_t delay_steps() const { return samples_.size() - 1; }
  Interpolation interpolation() const { return Interpolation::grid_exact; }

  const ModalState& sample(std::size_t i) const { return samples_.at(i); }
  const std::vector<ModalState>& samples() const { return samples_; }
  /// Phi(s); s must lie on the grid in [-r, 0].
  const ModalState& at(double s) const;
  const ModalState& initial() const { return samples_.back(); }

 private:
  double delay_;
  double dt_;
  std::vector<ModalState> samples_;
};

/// Impulse times t_1 < ... < t_p in (0, tau), each with its velocity map.
struct ImpulseSchedule {
  std::vector<double> times;
  std::vector<ImpulseMap> maps;

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }
  double last_time() const { return times.empty() ? 0.0 : times.back(); }

  /// Throws std::invalid_argument on unordered times, times outside (0, tau),
  /// or times that are not multiples of dt.
  void validate(double horizon, double dt) const;
};

/// Left or right limit at a grid time.
enum class Side { left, right };

struct ImpulseRecord {
  std::size_t index = 0;
  ModalState before;
  ModalState after;
  Eigen::VectorXd jump;
};

/// States at every grid time n dt. states[n] holds the right limit z(t_n^+)
/// at impulse times; the left limit lives in the matching ImpulseRecord.
struct Trajectory {
  double dt = 0.0;
  std::vector<ModalState> states;
  std::vector<ImpulseRecord> impulses;

  // Integrator bookkeeping carried so that a run can be resumed from a copy.
  std::vector<Eigen::VectorXd> memory_samples;  // modal g(w(s_m - r)) for m <= last index
  Eigen::VectorXd memory_accumulator;           // recursive trapezoid sum at last index
  std::optional<std::size_t> tail_start;
  std::optional<std::size_t> max_delayed_index_in_tail;

  std::size_t last_index() const { return states.size() - 1; }
  double time(std::size_t n) const { return static_cast<double>(n) * dt; }
  double end_time() const { return time(last_index()); }
  const ModalState& back() const { return states.back(); }

  const ImpulseRecord* impulse_at(std::size_t n) const;
  const ModalState& state(std::size_t n, Side side = Side::right) const;
};

/// z(t - r): a history sample when t - r <= 0, a trajectory state otherwise.
ModalState delayed_state(const Trajectory& trajectory, const HistorySegment& history, double t,
                         Side side = Side::right);

/// Jump of the velocity component; w is carried over untouched.
ModalState apply_impulse(const ModalState& state, const Eigen::VectorXd& jump);

}  // namespace sdwave
