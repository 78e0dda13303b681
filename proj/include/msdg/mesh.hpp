#pragma once

#include <string>
#include <vector>

namespace msdg {

enum class MeshPattern { uniform, two_one_alternating, custom };

MeshPattern parse_mesh_pattern(const std::string& name);
std::string to_string(MeshPattern p);

// Which cell to use when a point sits exactly on an interface.
enum class Side { left, right };

// Periodic 1D mesh. Edge j+1/2 in the usual notation is edges()[j+1];
// edge 0 and edge N coincide under the periodic wrap.
class Mesh1D {
 public:
  Mesh1D(std::vector<double> edges, MeshPattern pattern = MeshPattern::custom);

  int num_cells() const { return static_cast<int>(widths_.size()); }
  double left() const { return edges_.front(); }
  double right() const { return edges_.back(); }
  double length() const { return right() - left(); }
  const std::vector<double>& edges() const { return edges_; }
  const std::vector<double>& widths() const { return widths_; }
  double width(int j) const { return widths_[j]; }
  double center(int j) const { return 0.5 * (edges_[j] + edges_[j + 1]); }
  double min_width() const;
  double max_width() const;
  MeshPattern pattern() const { return pattern_; }

  // Wrap x into [left, right) periodically.
  double wrap(double x) const;
  // Cell containing x; on an interface, `side` picks the cell to its left or right.
  int locate(double x, Side side) const;

 private:
  std::vector<double> edges_;
  std::vector<double> widths_;
  MeshPattern pattern_;
};

// Uniform or 2:1 alternating (odd-numbered cells twice as wide) periodic mesh.
Mesh1D build_mesh(double x_left, double x_right, int N, MeshPattern pattern);

}  // namespace msdg
