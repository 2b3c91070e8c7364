#include "sdwave/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <thread>

namespace sdwave {

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (const auto& v : violations) out << "  [" << v.hypothesis << "] " << v.detail << "\n";
  return out.str();
}

ValidationError::ValidationError(ValidationReport report)
    : std::runtime_error("configuration violates model hypotheses:\n" + report.summary()),
      report_(std::move(report)) {}

bool SteeringReport::all_ok() const {
  return std::all_of(rows.begin(), rows.end(), [](const SteeringRow& r) { return r.ok(); });
}

namespace {

constexpr const char* kModel = "model: eta > 0, gamma > 0, 0 < r < tau";
constexpr const char* kDomain = "domain: L > 0, N >= 1, collocation grid >= 4N";
constexpr const char* kActuator = "actuator: 0 <= a < b <= L";
constexpr const char* kGrid = "grid: dt divides r, tau, every t_k and every delta";
constexpr const char* kImpulses = "impulses: 0 < t_1 < ... < t_p < tau with bounded I_k";
constexpr const char* kWindow = "window: 0 < delta < min(tau - t_p, r)";
constexpr const char* kGrowth = "growth: |f(t, w, v, u)| <= a0 sqrt(w^2 + v^2) + b0";
constexpr const char* kKernel = "memory: M essentially bounded on [0, tau]^2, g bounded";
constexpr const char* kRegularization = "regularization: alpha > 0";
constexpr const char* kSweep = "sweep: non-empty alpha and delta lists";
constexpr const char* kProfiles = "profiles: history and target well-defined on the basis";
constexpr const char* kSolver = "solver: quadrature node counts";

std::string fmt(double x) {
  std::ostringstream out;
  out.precision(10);
  out << x;
  return out.str();
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

ValidationReport validate_config(const ExperimentConfig& config, const ValidationOptions& options) {
  ValidationReport report;
  auto fail = [&](const char* hypothesis, std::string detail) {
    report.violations.push_back({hypothesis, std::move(detail)});
  };

  const auto& p = config.model;
  bool model_ok = true;
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    fail(kModel, e.what());
    model_ok = false;
  }

  std::optional<SpectralBasis> basis;
  try {
    basis.emplace(config.domain, config.modes);
  } catch (const std::invalid_argument& e) {
    fail(kDomain, e.what());
  }
  if (basis) {
    try {
      (void)overlap_matrix(*basis, config.actuator);
    } catch (const std::invalid_argument& e) {
      fail(kActuator, e.what());
    }
  }

  const double dt = config.solver.dt;
  const bool dt_ok = dt > 0.0 && std::isfinite(dt);
  if (!dt_ok) fail(kGrid, "dt = " + fmt(dt) + " must be positive");
  if (dt_ok && model_ok) {
    if (!grid_steps(p.horizon, dt)) fail(kGrid, "dt = " + fmt(dt) + " does not divide tau = " + fmt(p.horizon));
    if (!grid_steps(p.delay, dt)) fail(kGrid, "dt = " + fmt(dt) + " does not divide r = " + fmt(p.delay));
  }

  const auto& imp = config.impulses;
  if (imp.times.size() != imp.maps.size()) fail(kImpulses, "impulse times and maps differ in count");
  for (std::size_t k = 0; k < imp.times.size(); ++k) {
    const double tk = imp.times[k];
    if (!(tk > 0.0) || (model_ok && !(tk < p.horizon))) {
      fail(kImpulses, "t_" + std::to_string(k + 1) + " = " + fmt(tk) + " outside (0, tau)");
    }
    if (k > 0 && !(tk > imp.times[k - 1])) {
      fail(kImpulses, "impulse times must be strictly increasing at t_" + std::to_string(k + 1));
    }
    if (dt_ok && tk > 0.0 && !grid_steps(tk, dt)) {
      fail(kGrid, "dt does not divide t_" + std::to_string(k + 1) + " = " + fmt(tk));
    }
    if (k < imp.maps.size() && !std::isfinite(imp.maps[k].bound())) {
      fail(kImpulses, "I_" + std::to_string(k + 1) + " is unbounded");
    }
  }

  std::vector<double> deltas = config.sweep.deltas;
  deltas.insert(deltas.end(), options.extra_deltas.begin(), options.extra_deltas.end());
  const std::optional<double> last_impulse =
      imp.times.empty() ? std::nullopt : std::optional<double>(imp.last_time());
  for (double delta : deltas) {
    if (!model_ok) break;
    SteeringWindow w{p.horizon, delta, std::max(config.gramian_nodes, 2)};
    try {
      w.validate(p.delay, last_impulse);
    } catch (const std::invalid_argument& e) {
      fail(kWindow, e.what());
    }
    if (dt_ok && delta > 0.0 && !grid_steps(delta, dt)) {
      fail(kGrid, "dt does not divide delta = " + fmt(delta));
    }
  }

  std::vector<double> alphas = config.sweep.alphas;
  alphas.insert(alphas.end(), options.extra_alphas.begin(), options.extra_alphas.end());
  for (double alpha : alphas) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) fail(kRegularization, "alpha = " + fmt(alpha));
  }
  if (options.require_sweep) {
    if (config.sweep.alphas.empty()) fail(kSweep, "[sweep] alphas is empty");
    if (config.sweep.deltas.empty()) fail(kSweep, "[sweep] deltas is empty");
  }
  if (config.sweep.threads < 1) fail(kSweep, "threads must be >= 1");

  const auto& f = config.nonlinearity.f;
  if (!(f.growth_a0() >= 0.0) || !(f.growth_b0() >= 0.0)) {
    fail(kGrowth, "declared a0, b0 must be non-negative");
  } else if (model_ok) {
    const GrowthProbe probe = probe_growth_bound(f, p.horizon, options.growth_probes);
    if (!probe.satisfied) {
      fail(kGrowth, "f = " + to_string(f.kind) + " exceeds a0 = " + fmt(f.growth_a0()) +
                        ", b0 = " + fmt(f.growth_b0()) + " by " + fmt(probe.worst_excess) +
                        " at (t, w, v, u) = (" + fmt(probe.t) + ", " + fmt(probe.w) + ", " +
                        fmt(probe.v) + ", " + fmt(probe.u) + ")");
    }
  }

  const auto& kernel = config.kernel;
  if (!std::isfinite(kernel.m0)) fail(kKernel, "m0 must be finite");
  if (!std::isfinite(kernel.kappa) || kernel.kappa < 0.0) {
    fail(kKernel, "kappa = " + fmt(kernel.kappa) + " must be finite and non-negative");
  }
  if (!std::isfinite(config.nonlinearity.g.bound())) fail(kKernel, "g amplitude must be finite");

  if (config.solver.control_nodes < 0) fail(kSolver, "control_nodes must be >= 0");
  if (config.gramian_nodes < 2) fail(kSolver, "gramian_nodes must be >= 2");

  if (basis) {
    auto check_mode = [&](const StateProfile& prof, const char* name) {
      if (prof.kind == StateProfile::Kind::csv) return;
      try {
        (void)prof.at(0.0, *basis);
      } catch (const std::exception& e) {
        fail(kProfiles, std::string(name) + ": " + e.what());
      }
    };
    check_mode(config.history, "history");
    check_mode(config.target, "target");
    const auto& base = config.base_control;
    if (base.kind != ControlProfile::Kind::zero && (base.mode < 0 || base.mode >= config.modes)) {
      fail(kProfiles, "control mode " + std::to_string(base.mode + 1) + " outside 1.." +
                          std::to_string(config.modes));
    }
    if (config.history.kind == StateProfile::Kind::csv && model_ok && dt_ok) {
      try {
        (void)build_history(config, *basis);
      } catch (const std::exception& e) {
        fail(kProfiles, e.what());
      }
    }
  }
  return report;
}

HistorySegment build_history(const ExperimentConfig& config, const SpectralBasis& basis) {
  const auto& prof = config.history;
  if (prof.kind == StateProfile::Kind::csv) {
    const auto path = prof.file.is_absolute() ? prof.file : config.base_dir / prof.file;
    auto samples = read_history_csv(path, basis.size());
    const auto steps = grid_steps(config.model.delay, config.solver.dt);
    if (!steps || samples.size() != *steps + 1) {
      throw std::invalid_argument("history file " + path.string() + " has " +
                                  std::to_string(samples.size()) + " samples, expected r/dt + 1 = " +
                                  (steps ? std::to_string(*steps + 1) : std::string("?")));
    }
    return HistorySegment(config.model.delay, config.solver.dt, std::move(samples));
  }
  return HistorySegment::from_profile(config.model.delay, config.solver.dt,
                                      [&](double s) { return prof.at(s, basis); });
}

Experiment::Experiment(ExperimentConfig config, const ValidationOptions& options)
    : config_(std::move(config)) {
  ValidationReport report = validate_config(config_, options);
  if (!report.ok()) throw ValidationError(std::move(report));

  SpectralBasis basis(config_.domain, config_.modes);
  LinearControlSystem system(basis, config_.model, config_.actuator);
  HistorySegment history = build_history(config_, basis);
  target_ = config_.target.at(0.0, basis);
  simulator_ = std::make_unique<Simulator>(std::move(system), config_.nonlinearity, config_.kernel,
                                           config_.impulses, std::move(history), config_.solver);
}

ControlSignal Experiment::base_control() const {
  return ControlSignal(config_.base_control, simulator_->system().modes());
}

Trajectory Experiment::simulate() const { return simulator_->run(base_control()); }

SteeringWindow Experiment::window(double delta) const {
  SteeringWindow w{config_.model.horizon, delta, config_.gramian_nodes};
  const auto& imp = config_.impulses;
  w.validate(config_.model.delay,
             imp.empty() ? std::nullopt : std::optional<double>(imp.last_time()));
  if (!grid_steps(delta, config_.solver.dt)) {
    throw std::invalid_argument("dt does not divide delta = " + fmt(delta));
  }
  return w;
}

std::size_t Experiment::delta_key(double delta) const {
  return *grid_steps(delta, config_.solver.dt);
}

template <typename T, typename Fn>
const T& Experiment::cached(
    std::map<std::size_t, std::shared_future<std::shared_ptr<const T>>>& cache, std::size_t key,
    Fn&& compute) const {
  std::shared_future<std::shared_ptr<const T>> future;
  std::optional<std::promise<std::shared_ptr<const T>>> promise;
  {
    std::lock_guard lock(mutex_);
    auto it = cache.find(key);
    if (it != cache.end()) {
      future = it->second;
    } else {
      promise.emplace();
      future = promise->get_future().share();
      cache.emplace(key, future);
    }
  }
  if (promise) {
    try {
      promise->set_value(std::make_shared<const T>(compute()));
    } catch (...) {
      promise->set_exception(std::current_exception());
    }
  }
  return *future.get();
}

const Experiment::PhaseOne& Experiment::phase_one(double delta) const {
  const SteeringWindow w = window(delta);
  return cached<PhaseOne>(phase_cache_, delta_key(delta), [&] {
    const auto start = std::chrono::steady_clock::now();
    PhaseOne out;
    const ControlSignal base = base_control();
    out.handoff = simulator_->start();
    simulator_->advance(out.handoff, base, w.start());
    out.uncontrolled = out.handoff;
    simulator_->advance(out.uncontrolled, base, w.horizon);
    out.seconds = seconds_since(start);
    return out;
  });
}

const Experiment::GramianEntry& Experiment::gramian_entry(double delta) const {
  const SteeringWindow w = window(delta);
  return cached<GramianEntry>(gramian_cache_, delta_key(delta), [&] {
    const auto start = std::chrono::steady_clock::now();
    GramianEntry out{simulator_->system().assemble_gramian(w), 0.0, 0.0};
    out.q_min = gramian_spectrum(out.data).minCoeff();
    out.seconds = seconds_since(start);
    return out;
  });
}

const GramianData& Experiment::gramian(double delta) const { return gramian_entry(delta).data; }

SteeringRun Experiment::steer(double alpha, double delta) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
  const SteeringWindow w = window(delta);
  const PhaseOne& one = phase_one(delta);
  const GramianEntry& gram = gramian_entry(delta);
  const auto& system = simulator_->system();
  const auto& basis = system.basis();

  SteeringRun run;
  run.target = target_;
  SteeringRow& row = run.row;
  row.alpha = alpha;
  row.delta = delta;
  row.q_min = gram.q_min;
  row.handoff_index = one.handoff.last_index();
  row.phase1_seconds = one.seconds;
  row.gramian_seconds = gram.seconds;

  const auto start = std::chrono::steady_clock::now();
  TailControl tail(system, gram.data, one.handoff.back(), target_, alpha, config_.sweep.auxiliary);
  const ControlSignal control = base_control().with_tail(tail);

  run.trajectory = one.handoff;
  simulator_->advance(run.trajectory, control, w.horizon);
  run.uncontrolled = one.uncontrolled;

  const ModalState drift = system.semigroup().apply(w.length, one.handoff.back());
  const ModalState forced = system.controllability_map([&](double t) { return tail(t); }, w);
  run.linear_prediction = drift + forced;

  const ModalState& final_state = run.trajectory.back();
  row.final_error = z_half_norm(final_state - target_, basis);
  row.linear_residual = alpha * tail.solved().norm();
  row.nonlinear_perturbation = z_half_norm(final_state - run.linear_prediction, basis);
  row.uncontrolled_error = z_half_norm(run.uncontrolled.back() - target_, basis);
  row.target_residual = tail.target_residual().norm();
  row.max_delayed_index_in_tail = run.trajectory.max_delayed_index_in_tail;
  row.tail_seconds = seconds_since(start);
  return run;
}

SteeringRow Experiment::run_steering(double alpha, double delta) const {
  try {
    return steer(alpha, delta).row;
  } catch (const std::exception& e) {
    SteeringRow row;
    row.alpha = alpha;
    row.delta = delta;
    const double nan = std::nan("");
    row.final_error = row.linear_residual = row.nonlinear_perturbation = nan;
    row.uncontrolled_error = row.target_residual = row.q_min = nan;
    std::string kind = "error";
    if (dynamic_cast<const SolverAbort*>(&e)) kind = "solver_abort";
    if (dynamic_cast<const FactorizationError*>(&e)) kind = "factorization_error";
    if (dynamic_cast<const std::invalid_argument*>(&e)) kind = "invalid";
    row.status = kind + ": " + sanitize(e.what());
    return row;
  }
}

SteeringReport Experiment::sweep() const {
  SteeringReport report;
  report.epsilon = config_.sweep.epsilon;
  const auto& deltas = config_.sweep.deltas;
  const auto& alphas = config_.sweep.alphas;
  std::vector<std::vector<SteeringRow>> groups(deltas.size());

  auto run_group = [&](std::size_t g) {
    for (double alpha : alphas) groups[g].push_back(run_steering(alpha, deltas[g]));
  };
  const auto threads = static_cast<std::size_t>(std::max(config_.sweep.threads, 1));
  if (threads == 1 || deltas.size() == 1) {
    for (std::size_t g = 0; g < deltas.size(); ++g) run_group(g);
  } else {
    std::vector<std::thread> pool;
    std::size_t next = 0;
    std::mutex next_mutex;
    for (std::size_t i = 0; i < std::min(threads, deltas.size()); ++i) {
      pool.emplace_back([&] {
        for (;;) {
          std::size_t g;
          {
            std::lock_guard lock(next_mutex);
            if (next >= deltas.size()) return;
            g = next++;
          }
          run_group(g);
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& group : groups) {
    for (auto& row : group) report.rows.push_back(std::move(row));
  }
  return report;
}

std::vector<double> growth_envelope(const Simulator& simulator, double control_bound) {
  const auto& basis = simulator.basis();
  const auto& semigroup = simulator.system().semigroup();
  const double dt = simulator.solver().dt;
  const std::size_t steps = simulator.horizon_steps();
  const std::size_t lag = simulator.history().delay_steps();
  const double sqrt_l = std::sqrt(basis.length());

  double m0 = 1.0;
  for (std::size_t n = 0; n <= steps; ++n) {
    m0 = std::max(m0, semigroup.operator_norm(static_cast<double>(n) * dt));
  }
  const auto& f = simulator.nonlinearity().f;
  const double a_tilde = f.growth_a0() * std::max(1.0, 1.0 / std::sqrt(basis.eigenvalue(0)));
  const double b_tilde = f.growth_b0() * sqrt_l;
  const double mem_rate = simulator.kernel().bound() * simulator.nonlinearity().g.bound() * sqrt_l;

  double history_bound = 0.0;
  for (const auto& z : simulator.history().samples()) {
    history_bound = std::max(history_bound, z_half_norm(z, basis));
  }

  std::vector<std::size_t> impulse_steps;
  for (double tk : simulator.impulses().times) impulse_steps.push_back(*grid_steps(tk, dt));

  std::vector<double> envelope(steps + 1);
  envelope[0] = m0 * z_half_norm(simulator.history().initial(), basis);
  for (std::size_t n = 0; n < steps; ++n) {
    const double t_next = static_cast<double>(n + 1) * dt;
    const double delayed = (n + 1 > lag) ? envelope[n + 1 - lag] : 0.0;
    const double rate = a_tilde * std::max(history_bound, delayed) + b_tilde + mem_rate * t_next +
                        control_bound;
    double next = envelope[n] + m0 * dt * rate;
    for (std::size_t k = 0; k < impulse_steps.size(); ++k) {
      if (impulse_steps[k] == n + 1) next += m0 * simulator.impulses().maps[k].bound() * sqrt_l;
    }
    envelope[n + 1] = next;
  }
  return envelope;
}

}  // namespace sdwave
