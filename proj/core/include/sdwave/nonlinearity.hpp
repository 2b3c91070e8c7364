#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace sdwave {

/// Delayed forcing f(t, w, v, u), evaluated pointwise on the collocation grid.
///
/// Registry:
///   zero              f = 0
///   saturated_linear  f = a tanh((w + v) / sqrt 2) + b cos(omega t)
///   bounded_coupled   f = a tanh((w + v) / sqrt 2) cos(u) + b sin(u)
///   quadratic         f = a w^2 + b            (unbounded; for validator checks)
///
/// growth_a0 / growth_b0 are the declared constants in
/// |f| <= a0 sqrt(w^2 + v^2) + b0. When not declared they default to |a|, |b|.
struct ForcingTerm {
  enum class Kind { zero, saturated_linear, bounded_coupled, quadratic };

  Kind kind = Kind::zero;
  double a = 0.0;
  double b = 0.0;
  double omega = 1.0;
  std::optional<double> declared_a0;
  std::optional<double> declared_b0;

  double operator()(double t, double w, double v, double u) const;
  double growth_a0() const;
  double growth_b0() const;
  bool depends_on_control() const { return kind == Kind::bounded_coupled; }
  bool is_zero() const { return kind == Kind::zero || (a == 0.0 && b == 0.0); }
};

/// Pointwise memory response g(w), scaled by an amplitude: zero | sin | tanh.
struct MemoryResponse {
  enum class Kind { zero, sin, tanh };

  Kind kind = Kind::zero;
  double amplitude = 1.0;

  double operator()(double w) const;
  /// sup |g| over the real line.
  double bound() const;
  bool is_zero() const { return kind == Kind::zero || amplitude == 0.0; }
};

/// Impulse I_k(t, w, v, u) applied to the velocity.
///   kick          I = value
///   proportional  I = clamp(gain * v, -clip, clip)
struct ImpulseMap {
  enum class Kind { kick, proportional };

  Kind kind = Kind::kick;
  double value = 0.0;
  double gain = 0.0;
  double clip = 1.0;

  double operator()(double t, double w, double v, double u) const;
  /// sup |I| over all arguments.
  double bound() const;
};

ForcingTerm::Kind parse_forcing_kind(std::string_view name);
MemoryResponse::Kind parse_memory_response_kind(std::string_view name);
ImpulseMap::Kind parse_impulse_kind(std::string_view name);

std::string to_string(ForcingTerm::Kind kind);
std::string to_string(MemoryResponse::Kind kind);
std::string to_string(ImpulseMap::Kind kind);

/// Outcome of probing |f| <= a0 sqrt(w^2 + v^2) + b0 on a random set.
struct GrowthProbe {
  bool satisfied = true;
  double worst_excess = 0.0;  // max of |f| - bound over the probes
  double t = 0.0, w = 0.0, v = 0.0, u = 0.0;  // arguments attaining worst_excess
  int probes = 0;
};

/// Probes magnitudes log-uniform in [1e-3, 1e3] with random signs, plus the
/// origin. A probe fails when the bound is exceeded by more than 1e-9.
GrowthProbe probe_growth_bound(const ForcingTerm& f, double horizon, int probes = 4096,
                               std::uint64_t seed = 0x5eedULL);

}  // namespace sdwave
