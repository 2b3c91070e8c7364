#pragma once

#include <array>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "sdwave/spectral_domain.hpp"
#include "sdwave/state_space.hpp"

namespace sdwave {

enum class DampingRegime { underdamped, critical, overdamped };

/// |eta^2 - 4 gamma| below this selects the repeated-root formula.
inline constexpr double kCriticalDampingThreshold = 1e-9;

DampingRegime damping_regime(double eta, double gamma);
const char* to_string(DampingRegime regime);

/// Generator restricted to one mode: R = [[0, 1], [-gamma lambda, -eta sqrt(lambda)]].
struct ModalBlock {
  Eigen::Index index = 0;
  double lambda = 1.0;
  Eigen::Matrix2d generator;
  DampingRegime regime = DampingRegime::underdamped;
};

ModalBlock modal_block(const SpectralBasis& basis, Eigen::Index index, const ModelParams& params);

/// Roots of mu^2 + eta sqrt(lambda) mu + gamma lambda = 0; the first root is
/// the slower one (larger real part).
std::array<std::complex<double>, 2> block_eigenvalues(double lambda, double eta, double gamma);

/// exp(R t) in closed form:
///
///   exp(R t) = e^{sigma t} (C(t) I + S(t) (R - sigma I)),  sigma = -eta sqrt(lambda) / 2,
///
/// where (R - sigma I)^2 = d^2 I with d^2 = lambda (eta^2 - 4 gamma) / 4, and
/// (C, S) = (cosh dt, sinh(dt)/d), (cos wt, sin(wt)/w) or (1, t) for the
/// overdamped, underdamped and critical regimes. Throws on t < 0.
Eigen::Matrix2d block_exp(double lambda, double t, double eta, double gamma);

/// T(t) = sum_j exp(R_j t) P_j acting on modal coordinates, and its adjoint
/// with respect to the Z^{1/2} inner product, T*(t) = W^{-1} T(t)^T W with
/// W = diag(lambda, 1) per mode.
class Semigroup {
 public:
  Semigroup(const SpectralBasis& basis, const ModelParams& params);

  Eigen::Index size() const { return static_cast<Eigen::Index>(lambda_.size()); }
  DampingRegime regime() const { return regime_; }
  const ModelParams& params() const { return params_; }

  Eigen::Matrix2d block(Eigen::Index k, double t) const;
  std::vector<Eigen::Matrix2d> blocks(double t) const;

  /// Block k of T(t) written in energy coordinates (sqrt(lambda) w, v).
  Eigen::Matrix2d energy_block(Eigen::Index k, double t) const;

  ModalState apply(double t, const ModalState& z) const;
  ModalState apply_adjoint(double t, const ModalState& z) const;

  /// Operator norm of T(t) on Z^{1/2}: the largest spectral norm of the
  /// energy-coordinate blocks.
  double operator_norm(double t) const;

 private:
  ModelParams params_;
  DampingRegime regime_;
  std::vector<double> lambda_;
};

}  // namespace sdwave
