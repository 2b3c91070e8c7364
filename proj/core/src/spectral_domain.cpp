#include "sdwave/spectral_domain.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sdwave {

SpectralBasis::SpectralBasis(DomainSpec domain, int modes) : length_(domain.length) {
  if (!(domain.length > 0.0) || !std::isfinite(domain.length)) {
    throw std::invalid_argument("domain length must be positive, got " +
                                std::to_string(domain.length));
  }
  if (modes < 1) {
    throw std::invalid_argument("basis needs at least one mode, got " + std::to_string(modes));
  }
  const int points = domain.grid_points == 0 ? 4 * modes : domain.grid_points;
  if (points < 4 * modes) {
    throw std::invalid_argument("grid_points must be at least 4N (" + std::to_string(4 * modes) +
                                "), got " + std::to_string(points));
  }

  normalization_ = std::sqrt(2.0 / length_);
  grid_weight_ = length_ / (points + 1);

  eigenvalues_.resize(modes);
  sqrt_eigenvalues_.resize(modes);
  for (int k = 0; k < modes; ++k) {
    const double wavenumber = (k + 1) * std::numbers::pi / length_;
    sqrt_eigenvalues_[k] = wavenumber;
    eigenvalues_[k] = wavenumber * wavenumber;
  }

  grid_.resize(points);
  modes_at_grid_.resize(points, modes);
  for (int i = 0; i < points; ++i) {
    grid_[i] = (i + 1) * grid_weight_;
    for (int k = 0; k < modes; ++k) {
      // Integer argument keeps sin(j pi i / (M+1)) free of x-rounding.
      const double phase = std::numbers::pi * static_cast<double>((k + 1) * (i + 1)) / (points + 1);
      modes_at_grid_(i, k) = normalization_ * std::sin(phase);
    }
  }
}

double SpectralBasis::eigenfunction(Eigen::Index k, double x) const {
  return normalization_ * std::sin(sqrt_eigenvalues_[k] * x);
}

Eigen::VectorXd SpectralBasis::synthesize(const Eigen::VectorXd& coeffs) const {
  if (coeffs.size() != size()) {
    throw std::invalid_argument("synthesize: expected " + std::to_string(size()) +
                                " coefficients, got " + std::to_string(coeffs.size()));
  }
  return modes_at_grid_ * coeffs;
}

Eigen::VectorXd SpectralBasis::analyze(const Eigen::VectorXd& samples) const {
  if (samples.size() != grid_points()) {
    throw std::invalid_argument("analyze: expected " + std::to_string(grid_points()) +
                                " samples, got " + std::to_string(samples.size()));
  }
  return grid_weight_ * (modes_at_grid_.transpose() * samples);
}

namespace {

// (1/L) * int_a^b cos(m pi x / L) dx, with the m = 0 limit handled.
double cosine_integral(int m, double a, double b, double length) {
  if (m == 0) return (b - a) / length;
  const double k = m * std::numbers::pi / length;
  return (std::sin(k * b) - std::sin(k * a)) / (k * length);
}

}  // namespace

OverlapMatrix overlap_matrix(const SpectralBasis& basis, const ActuatorRegion& region) {
  const double length = basis.length();
  if (!(region.a >= 0.0 && region.a < region.b && region.b <= length)) {
    throw std::invalid_argument("actuator region must satisfy 0 <= a < b <= L");
  }
  const int n = basis.size();
  OverlapMatrix out{Eigen::MatrixXd(n, n), region};
  // 2 sin(p) sin(q) = cos(p - q) - cos(p + q)
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double value = cosine_integral(i - j, region.a, region.b, length) -
                           cosine_integral(i + j + 2, region.a, region.b, length);
      out.values(i, j) = value;
      out.values(j, i) = value;
    }
  }
  return out;
}

}  // namespace sdwave
