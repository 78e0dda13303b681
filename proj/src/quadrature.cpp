#include "msdg/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "msdg/errors.hpp"

namespace msdg {

void legendre(int k, double xi, double* p, double* dp) {
  p[0] = 1.0;
  if (dp) dp[0] = 0.0;
  if (k == 0) return;
  p[1] = xi;
  if (dp) dp[1] = 1.0;
  for (int i = 2; i <= k; ++i) {
    p[i] = ((2 * i - 1) * xi * p[i - 1] - (i - 1) * p[i - 2]) / i;
    // P_i' = P_{i-2}' + (2i-1) P_{i-1}
    if (dp) dp[i] = dp[i - 2] + (2 * i - 1) * p[i - 1];
  }
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1 || n > 32) throw ConfigError("gauss_legendre: n must lie in [1, 32], got " + std::to_string(n));
  QuadratureRule q;
  q.nodes.resize(n);
  q.weights.resize(n);
  std::vector<double> p(n + 1), dp(n + 1);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    for (int it = 0; it < 100; ++it) {
      legendre(n, x, p.data(), dp.data());
      const double dx = p[n] / dp[n];
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    legendre(n, x, p.data(), dp.data());
    const double w = 2.0 / ((1.0 - x * x) * dp[n] * dp[n]);
    q.nodes[i] = -x;
    q.nodes[n - 1 - i] = x;
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) q.nodes[n / 2] = 0.0;
  return q;
}

}  // namespace msdg
