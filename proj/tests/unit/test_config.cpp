#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include <gtest/gtest.h>

#include "oracles/oracles.hpp"
#include "sdwave/config.hpp"

using namespace sdwave;
namespace fs = std::filesystem;
constexpr double pi = std::numbers::pi;

namespace {

const char* kMinimal = R"(
[model]
eta = 1.0
gamma = 2.0
delay = 0.3
horizon = 1.0
)";

std::string with(const std::string& extra) { return std::string(kMinimal) + extra; }

fs::path temp_file(const std::string& name, const std::string& body) {
  const fs::path dir = fs::temp_directory_path() / "sdwave_config_tests";
  fs::create_directories(dir);
  const fs::path path = dir / name;
  std::ofstream(path) << body;
  return path;
}

}  // namespace

TEST(ParseConfig, MinimalUsesDefaults) {
  const auto cfg = parse_config(kMinimal);
  EXPECT_EQ(cfg.model.gamma, 2.0);
  EXPECT_EQ(cfg.modes, 8);
  EXPECT_DOUBLE_EQ(cfg.domain.length, pi);
  EXPECT_DOUBLE_EQ(cfg.actuator.b, pi);
  EXPECT_EQ(cfg.nonlinearity.f.kind, ForcingTerm::Kind::zero);
  EXPECT_EQ(cfg.kernel.m0, 0.0);
  EXPECT_TRUE(cfg.impulses.empty());
  EXPECT_EQ(cfg.history.kind, StateProfile::Kind::zero);
  EXPECT_EQ(cfg.solver.dt, 1e-3);
  EXPECT_EQ(cfg.solver.memory, MemoryQuadrature::direct);
  EXPECT_EQ(cfg.solver.control_nodes, 4);
  EXPECT_EQ(cfg.gramian_nodes, 64);
  EXPECT_TRUE(cfg.sweep.alphas.empty());
  EXPECT_FALSE(cfg.sweep.auxiliary.has_value());
}

TEST(ParseConfig, ShippedPresets) {
  const fs::path root = SDWAVE_SOURCE_DIR;
  const auto linear = load_config(root / "configs" / "linear_demo.toml");
  EXPECT_EQ(linear.modes, 4);
  EXPECT_EQ(linear.sweep.alphas.size(), 6u);
  EXPECT_EQ(linear.target.mode, 2);
  EXPECT_EQ(linear.base_dir, root / "configs");

  const auto semi = load_config(root / "configs" / "semilinear_demo.toml");
  EXPECT_EQ(semi.nonlinearity.f.kind, ForcingTerm::Kind::saturated_linear);
  EXPECT_EQ(semi.nonlinearity.g.kind, MemoryResponse::Kind::sin);
  EXPECT_EQ(semi.kernel.kind, MemoryKernel::Kind::exponential);
  ASSERT_EQ(semi.impulses.size(), 1u);
  EXPECT_EQ(semi.impulses.maps[0].kind, ImpulseMap::Kind::proportional);
  EXPECT_EQ(semi.history.kind, StateProfile::Kind::bump);
  EXPECT_EQ(semi.solver.memory, MemoryQuadrature::recursive);
}

TEST(ParseConfig, FullSurface) {
  const auto cfg = parse_config(with(R"(
[domain]
length = 2.0
modes = 5
grid_points = 40
[actuator]
a = 0.25
b = 1.5
[nonlinearity]
f = "bounded_coupled"
f_a = 0.5
f_b = 0.1
f_omega = 3.0
a0 = 0.7
b0 = 0.2
g = "tanh"
g_amplitude = 0.4
[memory]
kernel = "exponential"
m0 = 1.5
kappa = 2.5
[impulses]
events = [ { time = 0.2, kind = "kick", value = 0.3 },
           { time = 0.4, kind = "proportional", gain = 0.5, clip = 2.0 } ]
[history]
profile = "standing_wave"
mode = 2
w_amplitude = 1.5
frequency = 4.0
[target]
profile = "bump"
center = 1.0
width = 0.4
v_amplitude = 2.0
[control]
profile = "sine"
mode = 3
amplitude = 0.2
frequency = 6.0
[solver]
dt = 0.01
memory_quadrature = "recursive"
control_nodes = 2
gramian_nodes = 32
[sweep]
alphas = [1e-2, 1e-3]
deltas = [0.1, 0.05]
output_dir = "out/x"
epsilon = 0.05
threads = 2
auxiliary_profile = "constant"
auxiliary_mode = 1
auxiliary_amplitude = 0.5
)"));
  EXPECT_EQ(cfg.domain.length, 2.0);
  EXPECT_EQ(cfg.domain.grid_points, 40);
  EXPECT_EQ(cfg.actuator.a, 0.25);
  EXPECT_EQ(cfg.nonlinearity.f.kind, ForcingTerm::Kind::bounded_coupled);
  EXPECT_EQ(cfg.nonlinearity.f.omega, 3.0);
  EXPECT_EQ(cfg.nonlinearity.f.declared_a0, 0.7);
  EXPECT_EQ(cfg.nonlinearity.g.amplitude, 0.4);
  EXPECT_EQ(cfg.kernel.kappa, 2.5);
  ASSERT_EQ(cfg.impulses.size(), 2u);
  EXPECT_EQ(cfg.impulses.maps[0].value, 0.3);
  EXPECT_EQ(cfg.impulses.maps[1].clip, 2.0);
  EXPECT_EQ(cfg.history.frequency, 4.0);
  EXPECT_EQ(cfg.target.width, 0.4);
  EXPECT_EQ(cfg.base_control.mode, 2);  // zero-based internally
  EXPECT_EQ(cfg.base_control.kind, ControlProfile::Kind::sine);
  EXPECT_EQ(cfg.solver.control_nodes, 2);
  EXPECT_EQ(cfg.gramian_nodes, 32);
  EXPECT_EQ(cfg.sweep.epsilon, 0.05);
  EXPECT_EQ(cfg.sweep.threads, 2);
  ASSERT_TRUE(cfg.sweep.auxiliary.has_value());
  EXPECT_EQ(cfg.sweep.auxiliary->mode, 0);
  EXPECT_EQ(cfg.sweep.auxiliary->amplitude, 0.5);
}

TEST(ParseConfig, RejectsMalformedInput) {
  EXPECT_THROW(parse_config("[model\neta = 1"), ConfigError);
  EXPECT_THROW(parse_config("[model]\neta = 1.0\n"), ConfigError);  // gamma missing
  EXPECT_THROW(parse_config(with("[bogus]\nx = 1\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[domain]\nmodez = 3\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[domain]\nmodes = 2.5\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[solver]\ndt = \"small\"\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[solver]\nmemory_quadrature = \"simpson\"\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[nonlinearity]\nf = \"cubic\"\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[memory]\nkernel = \"power\"\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[history]\nprofile = \"spiral\"\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[history]\nprofile = \"csv\"\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[target]\nprofile = \"csv\"\nfile = \"x.csv\"\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[sweep]\nalphas = [\"a\"]\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[impulses]\nevents = [ { kind = \"kick\" } ]\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[impulses]\nevents = [ { time = 0.5, size = 1 } ]\n")), ConfigError);
  EXPECT_THROW(parse_config(with("[control]\nprofile = \"square\"\n")), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/sdwave.toml"), ConfigError);
}

TEST(ParseConfig, IntegersAcceptedWhereNumbersExpected) {
  const auto cfg = parse_config("[model]\neta = 1\ngamma = 1\ndelay = 0.5\nhorizon = 2\n");
  EXPECT_EQ(cfg.model.horizon, 2.0);
}

TEST(StateProfile, ConstantMatchesQuadratureProjection) {
  SpectralBasis basis({2.0, 0}, 6);
  StateProfile p;
  p.kind = StateProfile::Kind::constant;
  p.w_amplitude = 1.5;
  p.v_amplitude = -0.5;
  const auto z = p.at(0.0, basis);
  for (int k = 0; k < 6; ++k) {
    const double c = oracle::simpson(
        [&](double x) { return std::sqrt(2.0 / 2.0) * std::sin((k + 1) * pi * x / 2.0); }, 0.0, 2.0, 2000);
    EXPECT_NEAR(z.w[k], 1.5 * c, 1e-10);
    EXPECT_NEAR(z.v[k], -0.5 * c, 1e-10);
  }
}

TEST(StateProfile, BumpMatchesQuadratureProjection) {
  SpectralBasis basis({pi, 0}, 10);
  StateProfile p;
  p.kind = StateProfile::Kind::bump;
  p.center = 1.2;
  p.width = 0.7;
  p.w_amplitude = 2.0;
  const auto z = p.at(0.0, basis);
  for (int k = 0; k < 10; ++k) {
    const double c = oracle::simpson(
        [&](double x) {
          const double b = std::abs(x - 1.2) < 0.7 ? std::pow(std::cos(pi * (x - 1.2) / 1.4), 2) : 0.0;
          return b * std::sqrt(2.0 / pi) * std::sin((k + 1) * x);
        },
        0.5, 1.9, 4000);
    EXPECT_NEAR(z.w[k], 2.0 * c, 1e-10);
    EXPECT_EQ(z.v[k], 0.0);
  }
  p.center = 0.3;
  EXPECT_THROW(p.at(0.0, basis), std::out_of_range);
}

TEST(StateProfile, ModalProfiles) {
  SpectralBasis basis({pi, 0}, 3);
  StateProfile p;
  p.kind = StateProfile::Kind::standing_wave;
  p.mode = 2;
  p.w_amplitude = 2.0;
  p.frequency = 3.0;
  const auto z = p.at(-0.1, basis);
  EXPECT_DOUBLE_EQ(z.w[1], 2.0 * std::cos(-0.3));
  EXPECT_DOUBLE_EQ(z.v[1], -6.0 * std::sin(-0.3));
  EXPECT_EQ(z.w[0], 0.0);
  p.mode = 4;
  EXPECT_THROW(p.at(0.0, basis), std::out_of_range);
  p.kind = StateProfile::Kind::csv;
  EXPECT_THROW(p.at(0.0, basis), std::logic_error);
  EXPECT_EQ(parse_profile_kind(to_string(StateProfile::Kind::bump)), StateProfile::Kind::bump);
}

TEST(HistoryCsv, HeaderOptionalAndShapeChecked) {
  const auto with_header = temp_file("h1.csv", "s,w_1,v_1\n-0.1,1,2\n0,3,4\n");
  const auto samples = read_history_csv(with_header, 1);
  ASSERT_EQ(samples.size(), 2u);
  EXPECT_EQ(samples[1].w[0], 3.0);
  EXPECT_EQ(samples[1].v[0], 4.0);
  EXPECT_EQ(read_history_csv(temp_file("h2.csv", "-0.1,1,2\n0,3,4\n"), 1).size(), 2u);
  EXPECT_THROW(read_history_csv(temp_file("h3.csv", "-0.1,1,2,5\n"), 1), ConfigError);
  EXPECT_THROW(read_history_csv(temp_file("h4.csv", "-0.1,1,2\n0,x,4\n"), 1), ConfigError);
  EXPECT_THROW(read_history_csv("/nonexistent/history.csv", 1), ConfigError);
}
