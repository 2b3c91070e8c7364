#include "sdwave/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sdwave/quadrature.hpp"

namespace sdwave {

double MemoryKernel::operator()(double t, double s) const {
  if (kind == Kind::constant) return m0;
  return m0 * std::exp(-kappa * (t - s));
}

double MemoryKernel::decay(double dt) const {
  return kind == Kind::constant ? 1.0 : std::exp(-kappa * dt);
}

MemoryKernel::Kind parse_kernel_kind(const std::string& name) {
  if (name == "constant") return MemoryKernel::Kind::constant;
  if (name == "exponential") return MemoryKernel::Kind::exponential;
  throw std::invalid_argument("unknown memory kernel '" + name + "'");
}

Simulator::Simulator(LinearControlSystem system, NonlinearitySpec nonlinearity,
                     MemoryKernel kernel, ImpulseSchedule impulses, HistorySegment history,
                     SolverConfig solver)
    : system_(std::move(system)),
      nonlinearity_(nonlinearity),
      kernel_(kernel),
      impulses_(std::move(impulses)),
      history_(std::move(history)),
      solver_(solver) {
  const auto& p = system_.params();
  p.validate();
  const double dt = solver_.dt;
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const auto steps = grid_steps(p.horizon, dt);
  if (!steps) throw std::invalid_argument("dt must divide the horizon tau");
  horizon_steps_ = *steps;
  if (!grid_steps(p.delay, dt)) throw std::invalid_argument("dt must divide the delay r");
  if (std::abs(history_.dt() - dt) > 1e-15 * dt ||
      history_.delay_steps() != *grid_steps(p.delay, dt)) {
    throw std::invalid_argument("history must be sampled with the solver step over [-r, 0]");
  }
  if (history_.initial().size() != system_.modes()) {
    throw std::invalid_argument("history dimension does not match the basis");
  }
  impulses_.validate(p.horizon, dt);
  for (double tk : impulses_.times) impulse_steps_.push_back(*grid_steps(tk, dt));
  if (!std::isfinite(kernel_.m0) || !(kernel_.kappa >= 0.0) || !std::isfinite(kernel_.kappa)) {
    throw std::invalid_argument("memory kernel must be bounded (finite m0, kappa >= 0)");
  }
  if (solver_.control_nodes < 0) throw std::invalid_argument("control_nodes must be >= 0");

  step_blocks_ = system_.semigroup().blocks(dt);
  if (solver_.control_nodes > 0) {
    const auto rule = GaussLegendreRule::on(0.0, dt, solver_.control_nodes);
    control_offsets_ = rule.nodes;
    control_weights_ = rule.weights;
    for (double offset : control_offsets_) {
      node_blocks_.push_back(system_.semigroup().blocks(dt - offset));
    }
  }
}

Trajectory Simulator::start() const {
  Trajectory tr;
  tr.dt = solver_.dt;
  tr.states.push_back(history_.initial());
  tr.memory_accumulator = Eigen::VectorXd::Zero(system_.modes());
  return tr;
}

const ModalState& Simulator::delayed(const Trajectory& trajectory, std::size_t m,
                                     Side side) const {
  const std::size_t lag = history_.delay_steps();
  if (m <= lag) return history_.sample(m);
  return trajectory.state(m - lag, side);
}

Eigen::VectorXd Simulator::forcing_coefficients(double t, const ModalState& delayed_state,
                                                const Eigen::VectorXd& u) const {
  const auto& f = nonlinearity_.f;
  const auto& basis = system_.basis();
  if (f.is_zero()) return Eigen::VectorXd::Zero(basis.size());
  const Eigen::VectorXd w = basis.synthesize(delayed_state.w);
  const Eigen::VectorXd v = basis.synthesize(delayed_state.v);
  const Eigen::VectorXd uf =
      f.depends_on_control() ? basis.synthesize(u) : Eigen::VectorXd::Zero(w.size());
  Eigen::VectorXd values(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) values[i] = f(t, w[i], v[i], uf[i]);
  return basis.analyze(values);
}

Eigen::VectorXd Simulator::memory_response(const ModalState& delayed_state) const {
  const auto& basis = system_.basis();
  if (nonlinearity_.g.is_zero()) return Eigen::VectorXd::Zero(basis.size());
  Eigen::VectorXd values = basis.synthesize(delayed_state.w);
  for (auto& x : values) x = nonlinearity_.g(x);
  return basis.analyze(values);
}

Eigen::VectorXd Simulator::impulse_coefficients(std::size_t k, const ModalState& state,
                                                const Eigen::VectorXd& u) const {
  const auto& basis = system_.basis();
  const auto& map = impulses_.maps.at(k);
  const double tk = impulses_.times.at(k);
  const Eigen::VectorXd w = basis.synthesize(state.w);
  const Eigen::VectorXd v = basis.synthesize(state.v);
  const Eigen::VectorXd uf = basis.synthesize(u);
  Eigen::VectorXd values(w.size());
  for (Eigen::Index i = 0; i < w.size(); ++i) values[i] = map(tk, w[i], v[i], uf[i]);
  return basis.analyze(values);
}

Eigen::VectorXd Simulator::memory_term(const Trajectory& trajectory, std::size_t n) const {
  const Eigen::Index modes = system_.modes();
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(modes);
  if (n == 0 || kernel_.is_zero() || nonlinearity_.g.is_zero()) return sum;
  const double dt = solver_.dt;
  const double t = static_cast<double>(n) * dt;
  for (std::size_t m = 0; m <= n; ++m) {
    const double weight = (m == 0 || m == n) ? 0.5 * dt : dt;
    const double s = static_cast<double>(m) * dt;
    sum += weight * kernel_(t, s) * memory_response(delayed(trajectory, m, Side::right));
  }
  return sum;
}

const Eigen::VectorXd& Simulator::cached_memory_sample(Trajectory& trajectory,
                                                       std::size_t m) const {
  while (trajectory.memory_samples.size() <= m) {
    const std::size_t next = trajectory.memory_samples.size();
    trajectory.memory_samples.push_back(memory_response(delayed(trajectory, next, Side::right)));
  }
  return trajectory.memory_samples[m];
}

Eigen::VectorXd Simulator::next_memory_integral(Trajectory& trajectory, std::size_t n) const {
  // Integral at index n + 1 given the stored value at index n.
  const Eigen::Index modes = system_.modes();
  if (kernel_.is_zero() || nonlinearity_.g.is_zero()) return Eigen::VectorXd::Zero(modes);
  const double dt = solver_.dt;
  if (solver_.memory == MemoryQuadrature::recursive) {
    const double decay = kernel_.decay(dt);
    // Fill up to n + 1 first: growing the cache may move earlier samples.
    const Eigen::VectorXd& gnext = cached_memory_sample(trajectory, n + 1);
    const Eigen::VectorXd& gn = trajectory.memory_samples[n];
    return decay * trajectory.memory_accumulator + 0.5 * dt * kernel_.m0 * (decay * gn + gnext);
  }
  const double t = static_cast<double>(n + 1) * dt;
  cached_memory_sample(trajectory, n + 1);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(modes);
  for (std::size_t m = 0; m <= n + 1; ++m) {
    const double weight = (m == 0 || m == n + 1) ? 0.5 * dt : dt;
    const double s = static_cast<double>(m) * dt;
    sum += weight * kernel_(t, s) * trajectory.memory_samples[m];
  }
  return sum;
}

void Simulator::step(Trajectory& trajectory, const ControlSignal& control) const {
  const std::size_t n = trajectory.last_index();
  if (n >= horizon_steps_) throw std::out_of_range("cannot step past the horizon");
  if (control.modes() != system_.modes()) {
    throw std::invalid_argument("control dimension does not match the basis");
  }
  const double dt = solver_.dt;
  const double t = trajectory.time(n);
  const double t_next = trajectory.time(n + 1);
  const Eigen::Index modes = system_.modes();
  const Eigen::MatrixXd& overlap = system_.overlap().values;
  const std::size_t lag = history_.delay_steps();

  const bool fold_control = solver_.control_nodes == 0;
  const bool need_endpoint_u = fold_control || nonlinearity_.f.depends_on_control();
  Eigen::VectorXd u_left, u_right;
  if (need_endpoint_u) {
    u_left = control(t, Side::right);
    u_right = control(t_next, Side::left);
  } else {
    u_left = u_right = Eigen::VectorXd::Zero(modes);
  }

  const Eigen::VectorXd memory_next = next_memory_integral(trajectory, n);
  Eigen::VectorXd force_left = trajectory.memory_accumulator +
                               forcing_coefficients(t, delayed(trajectory, n, Side::right), u_left);
  Eigen::VectorXd force_right =
      memory_next + forcing_coefficients(t_next, delayed(trajectory, n + 1, Side::left), u_right);
  if (fold_control) {
    force_left += overlap * u_left;
    force_right += overlap * u_right;
  }

  const ModalState& z = trajectory.states[n];
  ModalState next = ModalState::zero(modes);
  for (Eigen::Index k = 0; k < modes; ++k) {
    const Eigen::Matrix2d& e = step_blocks_[static_cast<std::size_t>(k)];
    const double w = z.w[k];
    const double v = z.v[k] + 0.5 * dt * force_left[k];
    next.w[k] = e(0, 0) * w + e(0, 1) * v;
    next.v[k] = e(1, 0) * w + e(1, 1) * v + 0.5 * dt * force_right[k];
  }
  for (std::size_t q = 0; q < control_offsets_.size(); ++q) {
    const Eigen::VectorXd bu = overlap * control(t + control_offsets_[q], Side::right);
    const auto& blocks = node_blocks_[q];
    const double weight = control_weights_[q];
    for (Eigen::Index k = 0; k < modes; ++k) {
      const Eigen::Matrix2d& e = blocks[static_cast<std::size_t>(k)];
      next.w[k] += weight * e(0, 1) * bu[k];
      next.v[k] += weight * e(1, 1) * bu[k];
    }
  }

  if (!next.all_finite()) {
    std::ostringstream msg;
    msg << "non-finite state at t = " << t_next << " (step " << n + 1 << ")";
    throw SolverAbort(msg.str());
  }

  if (control.in_tail(t, Side::right)) {
    if (!trajectory.tail_start) trajectory.tail_start = n;
    // Both the f lookup and the newest memory sample read index n + 1 - lag.
    if (n + 1 > lag) {
      const std::size_t idx = n + 1 - lag;
      trajectory.max_delayed_index_in_tail =
          std::max(trajectory.max_delayed_index_in_tail.value_or(0), idx);
    } else if (!trajectory.max_delayed_index_in_tail) {
      trajectory.max_delayed_index_in_tail = 0;
    }
  }

  trajectory.memory_accumulator = memory_next;
  const auto hit = std::find(impulse_steps_.begin(), impulse_steps_.end(), n + 1);
  if (hit != impulse_steps_.end()) {
    const auto k = static_cast<std::size_t>(hit - impulse_steps_.begin());
    ImpulseRecord rec;
    rec.index = n + 1;
    rec.before = next;
    rec.jump = impulse_coefficients(k, next, control(t_next, Side::left));
    rec.after = apply_impulse(next, rec.jump);
    trajectory.states.push_back(rec.after);
    trajectory.impulses.push_back(std::move(rec));
  } else {
    trajectory.states.push_back(std::move(next));
  }
}

void Simulator::advance(Trajectory& trajectory, const ControlSignal& control, double t_end) const {
  const auto target = grid_steps(t_end, solver_.dt);
  if (!target) throw std::invalid_argument("advance target is not on the time grid");
  if (*target > horizon_steps_) throw std::out_of_range("advance target beyond the horizon");
  while (trajectory.last_index() < *target) step(trajectory, control);
}

Trajectory Simulator::run(const ControlSignal& control) const {
  Trajectory tr = start();
  advance(tr, control, params().horizon);
  return tr;
}

}  // namespace sdwave
