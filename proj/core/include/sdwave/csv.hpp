#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include <Eigen/Dense>

#include "sdwave/spectral_domain.hpp"
#include "sdwave/state_space.hpp"

namespace sdwave {

struct SteeringReport;

/// 17 significant digits, so values survive a text round trip bit for bit.
std::string format_double(double x);

/// Columns t, z_norm, w_1..w_N, v_1..v_N, event. Impulse times get two rows,
/// flagged pre_impulse and post_impulse.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, const SpectralBasis& basis);
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory,
                          const SpectralBasis& basis);

/// Columns index, eigenvalue.
void write_spectrum_csv(std::ostream& out, const Eigen::VectorXd& eigenvalues);
void write_spectrum_csv(const std::filesystem::path& path, const Eigen::VectorXd& eigenvalues);

/// Deterministic part of a sweep; wall-clock times go to the timings file.
void write_report_csv(std::ostream& out, const SteeringReport& report);
void write_report_csv(const std::filesystem::path& path, const SteeringReport& report);
void write_timings_csv(std::ostream& out, const SteeringReport& report);
void write_timings_csv(const std::filesystem::path& path, const SteeringReport& report);

}  // namespace sdwave
