#include "sdwave/state_space.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sdwave {

void ModelParams::validate() const {
  if (!(eta > 0.0)) throw std::invalid_argument("eta must be positive");
  if (!(gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  if (!(delay > 0.0)) throw std::invalid_argument("delay r must be positive");
  if (!(horizon > 0.0)) throw std::invalid_argument("horizon tau must be positive");
  if (!(delay < horizon)) throw std::invalid_argument("delay r must be smaller than tau");
}

namespace {

void check_same_size(const ModalState& a, const ModalState& b) {
  if (a.w.size() != b.w.size() || a.v.size() != b.v.size()) {
    throw std::invalid_argument("modal state dimension mismatch");
  }
}

void check_basis(const ModalState& s, const SpectralBasis& basis) {
  if (s.w.size() != basis.size() || s.v.size() != basis.size()) {
    throw std::invalid_argument("modal state has " + std::to_string(s.w.size()) + "/" +
                                std::to_string(s.v.size()) + " coefficients, basis has " +
                                std::to_string(basis.size()));
  }
}

}  // namespace

ModalState& ModalState::operator+=(const ModalState& other) {
  check_same_size(*this, other);
  w += other.w;
  v += other.v;
  return *this;
}

ModalState& ModalState::operator-=(const ModalState& other) {
  check_same_size(*this, other);
  w -= other.w;
  v -= other.v;
  return *this;
}

ModalState& ModalState::operator*=(double c) {
  w *= c;
  v *= c;
  return *this;
}

ModalState operator+(ModalState a, const ModalState& b) { return a += b; }
ModalState operator-(ModalState a, const ModalState& b) { return a -= b; }
ModalState operator*(double c, ModalState a) { return a *= c; }

bool operator==(const ModalState& a, const ModalState& b) {
  return a.w.size() == b.w.size() && a.v.size() == b.v.size() && a.w == b.w && a.v == b.v;
}

double z_half_inner(const ModalState& a, const ModalState& b, const SpectralBasis& basis) {
  check_basis(a, basis);
  check_basis(b, basis);
  return (basis.eigenvalues().array() * a.w.array() * b.w.array()).sum() + a.v.dot(b.v);
}

double z_half_norm(const ModalState& state, const SpectralBasis& basis) {
  check_basis(state, basis);
  return std::sqrt((basis.eigenvalues().array() * state.w.array().square()).sum() +
                   state.v.squaredNorm());
}

Eigen::VectorXd to_energy(const ModalState& state, const SpectralBasis& basis) {
  check_basis(state, basis);
  const Eigen::Index n = basis.size();
  Eigen::VectorXd out(2 * n);
  out.head(n) = basis.sqrt_eigenvalues().cwiseProduct(state.w);
  out.tail(n) = state.v;
  return out;
}

ModalState from_energy(const Eigen::VectorXd& energy, const SpectralBasis& basis) {
  const Eigen::Index n = basis.size();
  if (energy.size() != 2 * n) {
    throw std::invalid_argument("energy vector must have 2N entries");
  }
  return {energy.head(n).cwiseQuotient(basis.sqrt_eigenvalues()), energy.tail(n)};
}

std::optional<std::size_t> grid_steps(double duration, double dt) {
  if (!(dt > 0.0) || !(duration >= 0.0)) return std::nullopt;
  const double ratio = duration / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, rounded)) return std::nullopt;
  return static_cast<std::size_t>(rounded);
}

HistorySegment::HistorySegment(double delay, double dt, std::vector<ModalState> samples)
    : delay_(delay), dt_(dt), samples_(std::move(samples)) {
  const auto steps = grid_steps(delay, dt);
  if (!steps || *steps == 0) {
    throw std::invalid_argument("history step must divide the delay exactly");
  }
  if (samples_.size() != *steps + 1) {
    throw std::invalid_argument("history needs r/dt + 1 = " + std::to_string(*steps + 1) +
                                " samples, got " + std::to_string(samples_.size()));
  }
  const Eigen::Index n = samples_.front().size();
  for (const auto& s : samples_) {
    if (s.w.size() != n || s.v.size() != n) {
      throw std::invalid_argument("history samples have inconsistent dimensions");
    }
    if (!s.all_finite()) throw std::invalid_argument("history samples must be finite");
  }
}

HistorySegment HistorySegment::from_profile(double delay, double dt,
                                            const std::function<ModalState(double)>& profile) {
  const auto steps = grid_steps(delay, dt);
  if (!steps || *steps == 0) {
    throw std::invalid_argument("history step must divide the delay exactly");
  }
  std::vector<ModalState> samples;
  samples.reserve(*steps + 1);
  for (std::size_t i = 0; i <= *steps; ++i) {
    const double s = i == *steps ? 0.0 : -delay + static_cast<double>(i) * dt;
    samples.push_back(profile(s));
  }
  return HistorySegment(delay, dt, std::move(samples));
}

const ModalState& HistorySegment::at(double s) const {
  const auto i = grid_steps(s + delay_, dt_);
  if (!i || *i > delay_steps() || s > 0.0) {
    throw std::out_of_range("history lookup at s = " + std::to_string(s) +
                            " is not a grid point of [-r, 0]");
  }
  return samples_[*i];
}

void ImpulseSchedule::validate(double horizon, double dt) const {
  if (times.size() != maps.size()) {
    throw std::invalid_argument("each impulse time needs exactly one impulse map");
  }
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0.0 && times[k] < horizon)) {
      throw std::invalid_argument("impulse time " + std::to_string(times[k]) +
                                  " outside (0, tau)");
    }
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw std::invalid_argument("impulse times must be strictly increasing");
    }
    if (!grid_steps(times[k], dt)) {
      throw std::invalid_argument("impulse time " + std::to_string(times[k]) +
                                  " is not a multiple of dt");
    }
  }
}

const ImpulseRecord* Trajectory::impulse_at(std::size_t n) const {
  for (const auto& rec : impulses) {
    if (rec.index == n) return &rec;
  }
  return nullptr;
}

const ModalState& Trajectory::state(std::size_t n, Side side) const {
  if (n >= states.size()) {
    throw std::out_of_range("trajectory index " + std::to_string(n) + " not computed yet");
  }
  if (side == Side::left) {
    if (const auto* rec = impulse_at(n)) return rec->before;
  }
  return states[n];
}

ModalState delayed_state(const Trajectory& trajectory, const HistorySegment& history, double t,
                         Side side) {
  if (t < 0.0) {
    throw std::out_of_range("delayed lookup at t - r below -r");
  }
  const auto n = grid_steps(t, trajectory.dt);
  if (!n) throw std::out_of_range("delayed lookup off the time grid");
  const std::size_t lag = history.delay_steps();
  if (*n <= lag) return history.sample(*n);
  return trajectory.state(*n - lag, side);
}

ModalState apply_impulse(const ModalState& state, const Eigen::VectorXd& jump) {
  if (jump.size() != state.v.size()) {
    throw std::invalid_argument("impulse has " + std::to_string(jump.size()) +
                                " coefficients, state has " + std::to_string(state.v.size()));
  }
  ModalState out = state;
  out.v += jump;
  return out;
}

}  // namespace sdwave
