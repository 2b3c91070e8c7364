#include "sdwave/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

namespace sdwave {

double ForcingTerm::operator()(double t, double w, double v, double u) const {
  constexpr double inv_sqrt2 = 1.0 / std::numbers::sqrt2;
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::saturated_linear:
      return a * std::tanh((w + v) * inv_sqrt2) + b * std::cos(omega * t);
    case Kind::bounded_coupled:
      return a * std::tanh((w + v) * inv_sqrt2) * std::cos(u) + b * std::sin(u);
    case Kind::quadratic:
      return a * w * w + b;
  }
  return 0.0;
}

double ForcingTerm::growth_a0() const { return declared_a0.value_or(std::abs(a)); }
double ForcingTerm::growth_b0() const { return declared_b0.value_or(std::abs(b)); }

double MemoryResponse::operator()(double w) const {
  switch (kind) {
    case Kind::zero:
      return 0.0;
    case Kind::sin:
      return amplitude * std::sin(w);
    case Kind::tanh:
      return amplitude * std::tanh(w);
  }
  return 0.0;
}

double MemoryResponse::bound() const { return kind == Kind::zero ? 0.0 : std::abs(amplitude); }

double ImpulseMap::operator()(double /*t*/, double /*w*/, double v, double /*u*/) const {
  switch (kind) {
    case Kind::kick:
      return value;
    case Kind::proportional:
      return std::clamp(gain * v, -clip, clip);
  }
  return 0.0;
}

double ImpulseMap::bound() const {
  return kind == Kind::kick ? std::abs(value) : std::abs(clip);
}

ForcingTerm::Kind parse_forcing_kind(std::string_view name) {
  if (name == "zero") return ForcingTerm::Kind::zero;
  if (name == "saturated_linear") return ForcingTerm::Kind::saturated_linear;
  if (name == "bounded_coupled") return ForcingTerm::Kind::bounded_coupled;
  if (name == "quadratic") return ForcingTerm::Kind::quadratic;
  throw std::invalid_argument("unknown forcing '" + std::string(name) + "'");
}

MemoryResponse::Kind parse_memory_response_kind(std::string_view name) {
  if (name == "zero") return MemoryResponse::Kind::zero;
  if (name == "sin") return MemoryResponse::Kind::sin;
  if (name == "tanh") return MemoryResponse::Kind::tanh;
  throw std::invalid_argument("unknown memory response '" + std::string(name) + "'");
}

ImpulseMap::Kind parse_impulse_kind(std::string_view name) {
  if (name == "kick") return ImpulseMap::Kind::kick;
  if (name == "proportional") return ImpulseMap::Kind::proportional;
  throw std::invalid_argument("unknown impulse kind '" + std::string(name) + "'");
}

std::string to_string(ForcingTerm::Kind kind) {
  switch (kind) {
    case ForcingTerm::Kind::zero: return "zero";
    case ForcingTerm::Kind::saturated_linear: return "saturated_linear";
    case ForcingTerm::Kind::bounded_coupled: return "bounded_coupled";
    case ForcingTerm::Kind::quadratic: return "quadratic";
  }
  return "?";
}

std::string to_string(MemoryResponse::Kind kind) {
  switch (kind) {
    case MemoryResponse::Kind::zero: return "zero";
    case MemoryResponse::Kind::sin: return "sin";
    case MemoryResponse::Kind::tanh: return "tanh";
  }
  return "?";
}

std::string to_string(ImpulseMap::Kind kind) {
  return kind == ImpulseMap::Kind::kick ? "kick" : "proportional";
}

GrowthProbe probe_growth_bound(const ForcingTerm& f, double horizon, int probes,
                               std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> exponent(-3.0, 3.0);
  std::uniform_real_distribution<double> time(0.0, horizon);
  std::bernoulli_distribution negative(0.5);
  auto magnitude = [&] {
    const double m = std::pow(10.0, exponent(rng));
    return negative(rng) ? -m : m;
  };

  const double a0 = f.growth_a0();
  const double b0 = f.growth_b0();
  GrowthProbe out;
  out.worst_excess = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= probes; ++i) {
    double t = 0.0, w = 0.0, v = 0.0, u = 0.0;
    if (i > 0) {
      t = time(rng);
      w = magnitude();
      v = magnitude();
      u = magnitude();
    }
    const double excess = std::abs(f(t, w, v, u)) - (a0 * std::hypot(w, v) + b0);
    if (excess > out.worst_excess) {
      out.worst_excess = excess;
      out.t = t;
      out.w = w;
      out.v = v;
      out.u = u;
    }
    ++out.probes;
  }
  out.satisfied = out.worst_excess <= 1e-9;
  return out;
}

}  // namespace sdwave
