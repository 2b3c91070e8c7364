#pragma once

#include <type_traits>
#include <vector>

namespace sdwave {

/// Gauss-Legendre nodes and weights mapped to [a, b]; exact for polynomials
/// of degree up to 2n - 1.
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static GaussLegendreRule on(double a, double b, int n);

  int size() const { return static_cast<int>(nodes.size()); }

  template <typename F>
  auto integrate(F&& f) const {
    using Result = std::decay_t<decltype(f(nodes[0]))>;
    Result sum = weights[0] * f(nodes[0]);
    for (std::size_t i = 1; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    return sum;
  }
};

}  // namespace sdwave
