#include "sdwave/controllability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sdwave/quadrature.hpp"

namespace sdwave {

namespace {

bool near(double a, double b) { return std::abs(a - b) <= 1e-9 * std::max(1.0, std::abs(b)); }

}  // namespace

bool SteeringWindow::contains(double t) const {
  return (t >= start() || near(t, start())) && (t <= horizon || near(t, horizon));
}

void SteeringWindow::validate(double delay, std::optional<double> last_impulse) const {
  if (!(length > 0.0)) {
    throw std::invalid_argument("steering window length delta must be positive");
  }
  if (!(length < delay)) {
    throw std::invalid_argument("delta = " + std::to_string(length) +
                                " must be strictly smaller than the delay r = " +
                                std::to_string(delay));
  }
  if (!(length < horizon)) {
    throw std::invalid_argument("delta must be strictly smaller than tau");
  }
  if (last_impulse && !(length < horizon - *last_impulse)) {
    throw std::invalid_argument("delta = " + std::to_string(length) +
                                " must be strictly smaller than tau - t_p = " +
                                std::to_string(horizon - *last_impulse));
  }
  if (nodes < 2) throw std::invalid_argument("window quadrature needs at least 2 nodes");
}

Eigen::VectorXd gramian_spectrum(const GramianData& gramian) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gramian.q, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Eigen::VectorXd ControlProfile::operator()(double t, Eigen::Index modes) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(modes);
  if (kind == Kind::zero) return u;
  if (mode < 0 || mode >= modes) throw std::out_of_range("control profile mode out of range");
  u[mode] = kind == Kind::constant ? amplitude : amplitude * std::sin(frequency * t);
  return u;
}

ControlProfile::Kind parse_control_kind(const std::string& name) {
  if (name == "zero") return ControlProfile::Kind::zero;
  if (name == "constant") return ControlProfile::Kind::constant;
  if (name == "sine") return ControlProfile::Kind::sine;
  throw std::invalid_argument("unknown control profile '" + name + "'");
}

LinearControlSystem::LinearControlSystem(SpectralBasis basis, const ModelParams& params,
                                         const ActuatorRegion& region)
    : LinearControlSystem(basis, params, overlap_matrix(basis, region)) {}

LinearControlSystem::LinearControlSystem(SpectralBasis basis, const ModelParams& params,
                                         OverlapMatrix overlap)
    : basis_(std::move(basis)), overlap_(std::move(overlap)), semigroup_(basis_, params) {
  if (overlap_.size() != basis_.size()) {
    throw std::invalid_argument("overlap matrix does not match the basis size");
  }
}

ModalState LinearControlSystem::input_map(const Eigen::VectorXd& u) const {
  if (u.size() != modes()) {
    throw std::invalid_argument("control has " + std::to_string(u.size()) + " coefficients, expected " +
                                std::to_string(modes()));
  }
  return {Eigen::VectorXd::Zero(modes()), overlap_.values * u};
}

Eigen::VectorXd LinearControlSystem::adjoint_map(const ModalState& z, double t,
                                                 const SteeringWindow& window) const {
  if (!window.contains(t)) {
    throw std::out_of_range("adjoint map evaluated at t = " + std::to_string(t) +
                            " outside the steering window");
  }
  if (z.size() != modes()) throw std::invalid_argument("state dimension mismatch");
  const double s = std::max(0.0, window.horizon - t);
  Eigen::VectorXd y(modes());
  for (Eigen::Index k = 0; k < modes(); ++k) {
    const Eigen::Matrix2d e = semigroup_.block(k, s);
    y[k] = basis_.eigenvalue(k) * e(0, 1) * z.w[k] + e(1, 1) * z.v[k];
  }
  return overlap_.values * y;
}

ModalState LinearControlSystem::controllability_map(
    const std::function<Eigen::VectorXd(double)>& u, const SteeringWindow& window) const {
  const auto rule = GaussLegendreRule::on(window.start(), window.horizon, window.nodes);
  ModalState out = ModalState::zero(modes());
  for (int q = 0; q < rule.size(); ++q) {
    const double t = rule.nodes[q];
    const Eigen::VectorXd bu = overlap_.values * u(t);
    for (Eigen::Index k = 0; k < modes(); ++k) {
      const Eigen::Matrix2d e = semigroup_.block(k, window.horizon - t);
      out.w[k] += rule.weights[q] * e(0, 1) * bu[k];
      out.v[k] += rule.weights[q] * e(1, 1) * bu[k];
    }
  }
  return out;
}

GramianData LinearControlSystem::assemble_gramian(const SteeringWindow& window) const {
  if (window.nodes < 2) throw std::invalid_argument("Gramian quadrature needs at least 2 nodes");
  if (!(window.length > 0.0)) throw std::invalid_argument("steering window must have positive length");
  const Eigen::Index n = modes();
  const auto rule = GaussLegendreRule::on(window.start(), window.horizon, window.nodes);

  GramianData out{Eigen::MatrixXd::Zero(2 * n, 2 * n), window, rule.nodes, rule.weights};
  Eigen::MatrixXd factor(2 * n, n);  // T(tau - t) B in energy coordinates
  for (int q = 0; q < rule.size(); ++q) {
    const double s = window.horizon - rule.nodes[q];
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Matrix2d e = semigroup_.energy_block(k, s);
      factor.row(k) = e(0, 1) * overlap_.values.row(k);
      factor.row(n + k) = e(1, 1) * overlap_.values.row(k);
    }
    out.q.selfadjointView<Eigen::Lower>().rankUpdate(factor, rule.weights[q]);
  }
  out.q.triangularView<Eigen::StrictlyUpper>() = out.q.transpose();
  return out;
}

Eigen::VectorXd regularized_solve(const Eigen::MatrixXd& q, double alpha,
                                  const Eigen::VectorXd& rhs) {
  if (!(alpha > 0.0)) throw std::invalid_argument("regularization alpha must be positive");
  if (rhs.size() != q.rows()) throw std::invalid_argument("right-hand side dimension mismatch");
  Eigen::MatrixXd shifted = q;
  shifted.diagonal().array() += alpha;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(shifted, Eigen::EigenvaluesOnly);
    const double min_eig = eig.eigenvalues().minCoeff();
    throw FactorizationError("alpha I + Q is not positive definite (min eigenvalue " +
                                 std::to_string(min_eig) + ")",
                             min_eig);
  }
  return llt.solve(rhs);
}

Eigen::VectorXd regularized_solve(const GramianData& gramian, double alpha,
                                  const Eigen::VectorXd& rhs) {
  return regularized_solve(gramian.q, alpha, rhs);
}

Eigen::VectorXd steering_residual(const GramianData& gramian, double alpha,
                                  const Eigen::VectorXd& h_energy) {
  return alpha * regularized_solve(gramian, alpha, h_energy);
}

double steering_error(const GramianData& gramian, double alpha, const Eigen::VectorXd& h_energy) {
  return steering_residual(gramian, alpha, h_energy).norm();
}

TailControl::TailControl(const LinearControlSystem& system, const GramianData& gramian,
                         const ModalState& handoff, const ModalState& target, double alpha,
                         std::optional<ControlProfile> auxiliary)
    : semigroup_(system.semigroup()),
      overlap_(system.overlap()),
      sqrt_lambda_(system.basis().sqrt_eigenvalues()),
      window_(gramian.window),
      alpha_(alpha),
      auxiliary_(std::move(auxiliary)) {
  const auto& basis = system.basis();
  const ModalState drift = semigroup_.apply(window_.length, handoff);
  h_energy_ = to_energy(target - drift, basis);

  Eigen::VectorXd rhs = h_energy_;
  if (auxiliary_) {
    const Eigen::Index n = system.modes();
    const auto profile = *auxiliary_;
    const ModalState gv =
        system.controllability_map([&](double t) { return profile(t, n); }, window_);
    rhs -= to_energy(gv, basis);
  }
  solved_energy_ = regularized_solve(gramian, alpha, rhs);
  solved_modal_ = from_energy(solved_energy_, basis);
}

Eigen::VectorXd TailControl::operator()(double t) const {
  if (!window_.contains(t)) {
    throw std::out_of_range("tail control evaluated at t = " + std::to_string(t) +
                            " outside the steering window");
  }
  const Eigen::Index n = solved_modal_.size();
  const double s = std::max(0.0, window_.horizon - t);
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Matrix2d e = semigroup_.block(k, s);
    const double lambda = sqrt_lambda_[k] * sqrt_lambda_[k];
    y[k] = lambda * e(0, 1) * solved_modal_.w[k] + e(1, 1) * solved_modal_.v[k];
  }
  Eigen::VectorXd u = overlap_.values * y;
  if (auxiliary_) u += (*auxiliary_)(t, n);
  return u;
}

TailControl synthesize_tail(const LinearControlSystem& system, const GramianData& gramian,
                            const ModalState& handoff, const ModalState& target, double alpha,
                            std::optional<ControlProfile> auxiliary) {
  return TailControl(system, gramian, handoff, target, alpha, std::move(auxiliary));
}

ControlSignal::ControlSignal(ControlProfile base, Eigen::Index modes)
    : base_(base), modes_(modes) {
  if (modes < 1) throw std::invalid_argument("control needs at least one mode");
}

ControlSignal ControlSignal::with_tail(TailControl tail) const {
  ControlSignal out = *this;
  out.tail_ = std::move(tail);
  return out;
}

double ControlSignal::switch_time() const {
  return tail_ ? tail_->window().start() : std::numeric_limits<double>::infinity();
}

bool ControlSignal::in_tail(double t, Side side) const {
  if (!tail_) return false;
  const double start = switch_time();
  if (near(t, start)) return side == Side::right;
  return t > start;
}

Eigen::VectorXd ControlSignal::operator()(double t, Side side) const {
  if (in_tail(t, side)) return (*tail_)(t);
  return base_(t, modes_);
}

}  // namespace sdwave
