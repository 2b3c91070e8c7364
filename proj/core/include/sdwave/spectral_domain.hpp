#pragma once

#include <cstddef>
#include <numbers>

#include <Eigen/Dense>

namespace sdwave {

/// Interval (0, L) with the collocation resolution used for pointwise
/// nonlinearities. A grid_points value of 0 selects the default 4N.
struct DomainSpec {
  double length = std::numbers::pi;
  int grid_points = 0;
};

/// Dirichlet eigenbasis of -d^2/dx^2 on (0, L), truncated to N modes.
///
/// Mode index k (0-based) carries eigenvalue ((k+1) pi / L)^2 and
/// eigenfunction sqrt(2/L) sin((k+1) pi x / L). The collocation grid is the
/// interior DST-I grid x_i = i L / (M + 1), i = 1..M, on which the sampled
/// eigenfunctions are exactly orthonormal under the uniform weight L / (M + 1).
class SpectralBasis {
 public:
  SpectralBasis(DomainSpec domain, int modes);

  int size() const { return static_cast<int>(eigenvalues_.size()); }
  double length() const { return length_; }
  int grid_points() const { return static_cast<int>(grid_.size()); }

  double eigenvalue(Eigen::Index k) const { return eigenvalues_[k]; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::VectorXd& sqrt_eigenvalues() const { return sqrt_eigenvalues_; }

  double normalization() const { return normalization_; }
  double eigenfunction(Eigen::Index k, double x) const;

  const Eigen::VectorXd& grid() const { return grid_; }
  double grid_weight() const { return grid_weight_; }

  /// Samples sum_k c_k phi_k at the collocation grid.
  Eigen::VectorXd synthesize(const Eigen::VectorXd& coeffs) const;
  /// Discrete L2 projection of grid samples onto the first N modes.
  Eigen::VectorXd analyze(const Eigen::VectorXd& samples) const;

 private:
  double length_;
  double normalization_;
  double grid_weight_;
  Eigen::VectorXd eigenvalues_;
  Eigen::VectorXd sqrt_eigenvalues_;
  Eigen::VectorXd grid_;
  Eigen::MatrixXd modes_at_grid_;  // grid_points x N
};

/// Control subinterval (a, b) of (0, L).
struct ActuatorRegion {
  double a = 0.0;
  double b = std::numbers::pi;
};

/// O_ij = <1_region phi_i, phi_j>; the modal realization of multiplication
/// by the indicator of the actuator region.
struct OverlapMatrix {
  Eigen::MatrixXd values;
  ActuatorRegion region;

  Eigen::Index size() const { return values.rows(); }
};

OverlapMatrix overlap_matrix(const SpectralBasis& basis, const ActuatorRegion& region);

}  // namespace sdwave
