#include "msdg/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "msdg/errors.hpp"

namespace msdg {

MeshPattern parse_mesh_pattern(const std::string& name) {
  if (name == "uniform") return MeshPattern::uniform;
  if (name == "two_one_alternating" || name == "nonuniform") return MeshPattern::two_one_alternating;
  if (name == "custom") return MeshPattern::custom;
  throw ConfigError("unknown mesh pattern '" + name + "'");
}

std::string to_string(MeshPattern p) {
  switch (p) {
    case MeshPattern::uniform: return "uniform";
    case MeshPattern::two_one_alternating: return "two_one_alternating";
    default: return "custom";
  }
}

Mesh1D::Mesh1D(std::vector<double> edges, MeshPattern pattern) : edges_(std::move(edges)), pattern_(pattern) {
  if (edges_.size() < 3) throw ConfigError("mesh needs at least 2 cells");
  widths_.resize(edges_.size() - 1);
  for (size_t j = 0; j + 1 < edges_.size(); ++j) {
    widths_[j] = edges_[j + 1] - edges_[j];
    if (!(widths_[j] > 0.0) || !std::isfinite(widths_[j]))
      throw ConfigError("mesh edges must be finite and strictly increasing");
  }
}

double Mesh1D::min_width() const { return *std::min_element(widths_.begin(), widths_.end()); }
double Mesh1D::max_width() const { return *std::max_element(widths_.begin(), widths_.end()); }

double Mesh1D::wrap(double x) const {
  const double L = length();
  double y = std::fmod(x - left(), L);
  if (y < 0) y += L;
  if (y >= L) y -= L;
  return left() + y;
}

int Mesh1D::locate(double x, Side side) const {
  const double y = wrap(x);
  const int N = num_cells();
  // first edge strictly greater than y
  auto it = std::upper_bound(edges_.begin(), edges_.end(), y);
  int j = static_cast<int>(it - edges_.begin()) - 1;
  j = std::clamp(j, 0, N - 1);
  if (side == Side::left && y == edges_[j]) j = (j - 1 + N) % N;
  return j;
}

Mesh1D build_mesh(double x_left, double x_right, int N, MeshPattern pattern) {
  if (N < 2) throw ConfigError("build_mesh: N must be >= 2");
  if (!(x_right > x_left)) throw ConfigError("build_mesh: empty domain");
  std::vector<double> e(N + 1);
  const double L = x_right - x_left;
  if (pattern == MeshPattern::uniform) {
    for (int j = 0; j <= N; ++j) e[j] = x_left + L * j / N;
  } else if (pattern == MeshPattern::two_one_alternating) {
    if (N % 2) throw ConfigError("build_mesh: two_one_alternating needs even N");
    const double small = L / (1.5 * N);  // one 2h+h pair spans 3h
    e[0] = x_left;
    for (int j = 0; j < N; ++j) e[j + 1] = e[j] + (j % 2 == 0 ? 2.0 * small : small);
    e[N] = x_right;
  } else {
    throw ConfigError("build_mesh: custom meshes are built from an explicit edge list");
  }
  return Mesh1D(std::move(e), pattern);
}

}  // namespace msdg
