#include "sdwave/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sdwave {

DampingRegime damping_regime(double eta, double gamma) {
  const double discriminant = eta * eta - 4.0 * gamma;
  if (std::abs(discriminant) < kCriticalDampingThreshold) return DampingRegime::critical;
  return discriminant > 0.0 ? DampingRegime::overdamped : DampingRegime::underdamped;
}

const char* to_string(DampingRegime regime) {
  switch (regime) {
    case DampingRegime::underdamped: return "underdamped";
    case DampingRegime::critical: return "critical";
    case DampingRegime::overdamped: return "overdamped";
  }
  return "?";
}

ModalBlock modal_block(const SpectralBasis& basis, Eigen::Index index, const ModelParams& params) {
  if (index < 0 || index >= basis.size()) throw std::out_of_range("mode index out of range");
  ModalBlock block;
  block.index = index;
  block.lambda = basis.eigenvalue(index);
  block.generator << 0.0, 1.0, -params.gamma * block.lambda,
      -params.eta * std::sqrt(block.lambda);
  block.regime = damping_regime(params.eta, params.gamma);
  return block;
}

std::array<std::complex<double>, 2> block_eigenvalues(double lambda, double eta, double gamma) {
  if (!(lambda > 0.0)) throw std::invalid_argument("eigenvalue lambda must be positive");
  const double root = std::sqrt(lambda);
  const double sigma = -0.5 * eta * root;
  const double discriminant = eta * eta - 4.0 * gamma;
  switch (damping_regime(eta, gamma)) {
    case DampingRegime::critical:
      return {std::complex<double>(sigma), std::complex<double>(sigma)};
    case DampingRegime::overdamped: {
      // The slow root loses digits as sigma + d; use the product of roots.
      const double d = 0.5 * root * std::sqrt(discriminant);
      const double fast = sigma - d;
      const double slow = gamma * lambda / fast;
      return {std::complex<double>(slow), std::complex<double>(fast)};
    }
    case DampingRegime::underdamped: {
      const double omega = 0.5 * root * std::sqrt(-discriminant);
      return {std::complex<double>(sigma, omega), std::complex<double>(sigma, -omega)};
    }
  }
  return {};
}

Eigen::Matrix2d block_exp(double lambda, double t, double eta, double gamma) {
  if (t < 0.0) {
    throw std::invalid_argument("semigroup time must be non-negative, got " + std::to_string(t));
  }
  if (!(lambda > 0.0)) throw std::invalid_argument("eigenvalue lambda must be positive");
  const double root = std::sqrt(lambda);
  const double damping = eta * root;
  const double stiffness = gamma * lambda;
  const double sigma = -0.5 * damping;

  Eigen::Matrix2d shifted;  // R - sigma I
  shifted << 0.5 * damping, 1.0, -stiffness, -0.5 * damping;

  double c = 1.0;  // e^{sigma t} C(t)
  double s = t;    // e^{sigma t} S(t)
  const double discriminant = eta * eta - 4.0 * gamma;
  switch (damping_regime(eta, gamma)) {
    case DampingRegime::critical: {
      const double decay = std::exp(sigma * t);
      c = decay;
      s = decay * t;
      break;
    }
    case DampingRegime::underdamped: {
      const double omega = 0.5 * root * std::sqrt(-discriminant);
      const double decay = std::exp(sigma * t);
      c = decay * std::cos(omega * t);
      s = decay * std::sin(omega * t) / omega;
      break;
    }
    case DampingRegime::overdamped: {
      const double d = 0.5 * root * std::sqrt(discriminant);
      if (d * t <= 20.0) {
        const double decay = std::exp(sigma * t);
        c = decay * std::cosh(d * t);
        s = decay * std::sinh(d * t) / d;
      } else {
        const double slow = std::exp((sigma + d) * t);
        const double fast = std::exp((sigma - d) * t);
        c = 0.5 * (slow + fast);
        s = 0.5 * (slow - fast) / d;
      }
      break;
    }
  }
  Eigen::Matrix2d out = s * shifted;
  out(0, 0) += c;
  out(1, 1) += c;
  return out;
}

Semigroup::Semigroup(const SpectralBasis& basis, const ModelParams& params)
    : params_(params), regime_(damping_regime(params.eta, params.gamma)) {
  if (!(params.eta > 0.0) || !(params.gamma > 0.0)) {
    throw std::invalid_argument("semigroup needs eta, gamma > 0");
  }
  lambda_.assign(basis.eigenvalues().begin(), basis.eigenvalues().end());
}

Eigen::Matrix2d Semigroup::block(Eigen::Index k, double t) const {
  return block_exp(lambda_.at(static_cast<std::size_t>(k)), t, params_.eta, params_.gamma);
}

std::vector<Eigen::Matrix2d> Semigroup::blocks(double t) const {
  std::vector<Eigen::Matrix2d> out;
  out.reserve(lambda_.size());
  for (double lambda : lambda_) out.push_back(block_exp(lambda, t, params_.eta, params_.gamma));
  return out;
}

Eigen::Matrix2d Semigroup::energy_block(Eigen::Index k, double t) const {
  Eigen::Matrix2d e = block(k, t);
  const double root = std::sqrt(lambda_[static_cast<std::size_t>(k)]);
  e(0, 1) *= root;
  e(1, 0) /= root;
  return e;
}

namespace {

void check_dimension(const ModalState& z, Eigen::Index n) {
  if (z.w.size() != n || z.v.size() != n) {
    throw std::invalid_argument("state dimension does not match the semigroup (" +
                                std::to_string(n) + " modes)");
  }
}

}  // namespace

ModalState Semigroup::apply(double t, const ModalState& z) const {
  check_dimension(z, size());
  ModalState out = ModalState::zero(size());
  for (Eigen::Index k = 0; k < size(); ++k) {
    const Eigen::Matrix2d e = block(k, t);
    out.w[k] = e(0, 0) * z.w[k] + e(0, 1) * z.v[k];
    out.v[k] = e(1, 0) * z.w[k] + e(1, 1) * z.v[k];
  }
  return out;
}

ModalState Semigroup::apply_adjoint(double t, const ModalState& z) const {
  check_dimension(z, size());
  ModalState out = ModalState::zero(size());
  for (Eigen::Index k = 0; k < size(); ++k) {
    const double lambda = lambda_[static_cast<std::size_t>(k)];
    const Eigen::Matrix2d e = block(k, t);
    out.w[k] = e(0, 0) * z.w[k] + e(1, 0) * z.v[k] / lambda;
    out.v[k] = lambda * e(0, 1) * z.w[k] + e(1, 1) * z.v[k];
  }
  return out;
}

double Semigroup::operator_norm(double t) const {
  double norm = 0.0;
  for (Eigen::Index k = 0; k < size(); ++k) {
    const Eigen::Matrix2d e = energy_block(k, t);
    const double frob2 = e.squaredNorm();
    const double det = e.determinant();
    const double gap = std::sqrt(std::max(0.0, frob2 * frob2 - 4.0 * det * det));
    norm = std::max(norm, std::sqrt(0.5 * (frob2 + gap)));
  }
  return norm;
}

}  // namespace sdwave
