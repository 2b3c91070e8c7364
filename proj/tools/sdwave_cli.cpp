// Command-line front end: validate, simulate, steer, sweep, gramian.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 validation failure, 3 solver abort.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sdwave/config.hpp"
#include "sdwave/csv.hpp"
#include "sdwave/harness.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kInvalid = 2;
constexpr int kAbort = 3;

struct Options {
  std::string config;
  std::string output_dir;
  double alpha = 0.0;
  double delta = 0.0;
  int probes = 4096;
};

fs::path output_dir(const Options& opt, const sdwave::ExperimentConfig& cfg) {
  if (!opt.output_dir.empty()) return opt.output_dir;
  const fs::path dir = cfg.sweep.output_dir;
  return dir.is_absolute() ? dir : cfg.base_dir / dir;
}

void print_row(const sdwave::SteeringRow& r) {
  std::printf("alpha=%g delta=%g\n", r.alpha, r.delta);
  std::printf("  final_error            %.6e\n", r.final_error);
  std::printf("  linear_residual        %.6e\n", r.linear_residual);
  std::printf("  nonlinear_perturbation %.6e\n", r.nonlinear_perturbation);
  std::printf("  uncontrolled_error     %.6e\n", r.uncontrolled_error);
  std::printf("  q_min                  %.6e\n", r.q_min);
  std::printf("  status                 %s\n", r.status.c_str());
}

int run_validate(const Options& opt) {
  const auto cfg = sdwave::load_config(opt.config);
  sdwave::ValidationOptions vo;
  vo.require_sweep = true;
  vo.growth_probes = opt.probes;
  const auto report = sdwave::validate_config(cfg, vo);
  if (!report.ok()) {
    std::cerr << "invalid configuration " << opt.config << ":\n" << report.summary();
    return kInvalid;
  }
  std::cout << "ok: " << opt.config << "\n";
  return kOk;
}

int run_simulate(const Options& opt) {
  sdwave::Experiment exp(sdwave::load_config(opt.config));
  const auto trajectory = exp.simulate();
  const fs::path out = output_dir(opt, exp.config()) / "trajectory_uncontrolled.csv";
  sdwave::write_trajectory_csv(out, trajectory, exp.basis());
  std::printf("z(tau) norm %.6e, %zu impulses; wrote %s\n",
              sdwave::z_half_norm(trajectory.back(), exp.basis()), trajectory.impulses.size(),
              out.string().c_str());
  return kOk;
}

int run_steer(const Options& opt) {
  sdwave::ValidationOptions vo{false, {opt.delta}, {opt.alpha}, 4096};
  sdwave::Experiment exp(sdwave::load_config(opt.config), vo);
  const auto run = exp.steer(opt.alpha, opt.delta);
  const fs::path dir = output_dir(opt, exp.config());
  sdwave::write_trajectory_csv(dir / "trajectory_steered.csv", run.trajectory, exp.basis());
  sdwave::write_trajectory_csv(dir / "trajectory_uncontrolled_tail.csv", run.uncontrolled,
                               exp.basis());
  print_row(run.row);
  return kOk;
}

int run_sweep(const Options& opt) {
  sdwave::ValidationOptions vo;
  vo.require_sweep = true;
  vo.growth_probes = opt.probes;
  sdwave::Experiment exp(sdwave::load_config(opt.config), vo);
  const auto report = exp.sweep();
  const fs::path dir = output_dir(opt, exp.config());
  sdwave::write_report_csv(dir / "report.csv", report);
  sdwave::write_timings_csv(dir / "timings.csv", report);
  std::size_t failed = 0;
  for (const auto& row : report.rows) {
    if (!row.ok()) {
      ++failed;
      std::cerr << "row alpha=" << row.alpha << " delta=" << row.delta << ": " << row.status
                << "\n";
    }
  }
  std::printf("%zu rows (%zu failed); wrote %s\n", report.rows.size(), failed,
              (dir / "report.csv").string().c_str());
  return failed == 0 ? kOk : kAbort;
}

int run_gramian(const Options& opt) {
  sdwave::ValidationOptions vo{false, {opt.delta}, {}, 4096};
  sdwave::Experiment exp(sdwave::load_config(opt.config), vo);
  const auto spectrum = sdwave::gramian_spectrum(exp.gramian(opt.delta));
  const fs::path out = output_dir(opt, exp.config()) / "gramian_spectrum.csv";
  sdwave::write_spectrum_csv(out, spectrum);
  std::printf("q_min %.6e, q_max %.6e; wrote %s\n", spectrum.minCoeff(), spectrum.maxCoeff(),
              out.string().c_str());
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral-Galerkin simulator and steering toolkit for damped waves with memory, "
               "delay and impulses"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("config", opt.config, "TOML experiment configuration")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--output-dir", opt.output_dir, "Override [sweep] output_dir");
  };

  auto* validate = app.add_subcommand("validate", "Check a config against the model hypotheses");
  add_common(validate);
  validate->add_option("--probes", opt.probes, "Growth-bound probe count")->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "Run the base control over [0, tau]");
  add_common(simulate);

  auto* steer = app.add_subcommand("steer", "Steer with one (alpha, delta) pair");
  add_common(steer);
  steer->add_option("--alpha", opt.alpha, "Regularization parameter")->required();
  steer->add_option("--delta", opt.delta, "Steering window length")->required();

  auto* sweep = app.add_subcommand("sweep", "Run every (alpha, delta) pair in [sweep]");
  add_common(sweep);

  auto* gramian = app.add_subcommand("gramian", "Dump the Gramian spectrum for one window");
  add_common(gramian);
  gramian->add_option("--delta", opt.delta, "Steering window length")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kFailure;
  }

  try {
    if (validate->parsed()) return run_validate(opt);
    if (simulate->parsed()) return run_simulate(opt);
    if (steer->parsed()) return run_steer(opt);
    if (sweep->parsed()) return run_sweep(opt);
    if (gramian->parsed()) return run_gramian(opt);
  } catch (const sdwave::ValidationError& e) {
    std::cerr << e.what();
    return kInvalid;
  } catch (const sdwave::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kInvalid;
  } catch (const sdwave::SolverAbort& e) {
    std::cerr << "solver abort: " << e.what() << "\n";
    return kAbort;
  } catch (const sdwave::FactorizationError& e) {
    std::cerr << "factorization failure: " << e.what() << "\n";
    return kAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
