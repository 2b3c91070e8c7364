#include "sdwave/csv.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sdwave/harness.hpp"

namespace sdwave {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_for_writing(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void write_state_row(std::ostream& out, double t, const ModalState& z, const SpectralBasis& basis,
                     const char* event) {
  out << format_double(t) << ',' << format_double(z_half_norm(z, basis));
  for (Eigen::Index k = 0; k < z.size(); ++k) out << ',' << format_double(z.w[k]);
  for (Eigen::Index k = 0; k < z.size(); ++k) out << ',' << format_double(z.v[k]);
  out << ',' << event << '\n';
}

std::string optional_index(const std::optional<std::size_t>& i) {
  return i ? std::to_string(*i) : std::string();
}

}  // namespace

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, const SpectralBasis& basis) {
  out << "t,z_norm";
  for (Eigen::Index k = 1; k <= basis.size(); ++k) out << ",w_" << k;
  for (Eigen::Index k = 1; k <= basis.size(); ++k) out << ",v_" << k;
  out << ",event\n";
  for (std::size_t n = 0; n < trajectory.states.size(); ++n) {
    const double t = trajectory.time(n);
    if (const ImpulseRecord* rec = trajectory.impulse_at(n)) {
      write_state_row(out, t, rec->before, basis, "pre_impulse");
      write_state_row(out, t, rec->after, basis, "post_impulse");
    } else {
      write_state_row(out, t, trajectory.states[n], basis, "");
    }
  }
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& trajectory,
                          const SpectralBasis& basis) {
  auto out = open_for_writing(path);
  write_trajectory_csv(out, trajectory, basis);
}

void write_spectrum_csv(std::ostream& out, const Eigen::VectorXd& eigenvalues) {
  out << "index,eigenvalue\n";
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    out << i << ',' << format_double(eigenvalues[i]) << '\n';
  }
}

void write_spectrum_csv(const std::filesystem::path& path, const Eigen::VectorXd& eigenvalues) {
  auto out = open_for_writing(path);
  write_spectrum_csv(out, eigenvalues);
}

void write_report_csv(std::ostream& out, const SteeringReport& report) {
  out << "alpha,delta,final_error,linear_residual,nonlinear_perturbation,uncontrolled_error,"
         "target_residual,q_min,handoff_index,max_delayed_index_in_tail,within_epsilon,status\n";
  for (const auto& r : report.rows) {
    std::string within;
    if (report.epsilon && r.ok()) within = r.final_error < *report.epsilon ? "true" : "false";
    out << format_double(r.alpha) << ',' << format_double(r.delta) << ','
        << format_double(r.final_error) << ',' << format_double(r.linear_residual) << ','
        << format_double(r.nonlinear_perturbation) << ',' << format_double(r.uncontrolled_error)
        << ',' << format_double(r.target_residual) << ',' << format_double(r.q_min) << ','
        << (r.ok() ? std::to_string(r.handoff_index) : std::string()) << ','
        << optional_index(r.max_delayed_index_in_tail) << ',' << within << ',' << r.status << '\n';
  }
}

void write_report_csv(const std::filesystem::path& path, const SteeringReport& report) {
  auto out = open_for_writing(path);
  write_report_csv(out, report);
}

void write_timings_csv(std::ostream& out, const SteeringReport& report) {
  out << "alpha,delta,phase1_seconds,gramian_seconds,tail_seconds\n";
  for (const auto& r : report.rows) {
    out << format_double(r.alpha) << ',' << format_double(r.delta) << ','
        << format_double(r.phase1_seconds) << ',' << format_double(r.gramian_seconds) << ','
        << format_double(r.tail_seconds) << '\n';
  }
}

void write_timings_csv(const std::filesystem::path& path, const SteeringReport& report) {
  auto out = open_for_writing(path);
  write_timings_csv(out, report);
}

}  // namespace sdwave
