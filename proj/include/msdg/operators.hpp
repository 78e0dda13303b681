#pragma once

#include <Eigen/Sparse>
#include <memory>

#include "msdg/dg_space.hpp"

namespace msdg {

using SpMat = Eigen::SparseMatrix<double>;

// Linear map on DG coefficient space. Stored as a sparse matrix so that
// compositions (which widen the cell coupling) stay exact and cheap.
class BlockOperator {
 public:
  BlockOperator(SpacePtr space, SpMat m);
  static BlockOperator identity(const SpacePtr& space);
  static BlockOperator zero(const SpacePtr& space);

  const SpacePtr& space() const { return space_; }
  const SpMat& matrix() const { return m_; }
  Eigen::Index size() const { return m_.rows(); }

  Vec apply(const Vec& u) const;
  Vec operator*(const Vec& u) const { return apply(u); }
  Eigen::MatrixXd dense() const { return Eigen::MatrixXd(m_); }
  BlockOperator transpose() const;
  // (k+1)x(k+1) block coupling test functions of cell `row` to trial modes of cell `col`.
  Eigen::MatrixXd block(int row, int col) const;
  // Largest periodic cell distance with a nonzero coupling.
  int bandwidth() const;

 private:
  SpacePtr space_;
  SpMat m_;
};

BlockOperator compose(const BlockOperator& a, const BlockOperator& b);
BlockOperator add(const BlockOperator& a, const BlockOperator& b);
BlockOperator scale(const BlockOperator& a, double s);
BlockOperator shift_identity(const BlockOperator& a, double c);  // a + c I

inline BlockOperator operator*(const BlockOperator& a, const BlockOperator& b) { return compose(a, b); }
inline BlockOperator operator+(const BlockOperator& a, const BlockOperator& b) { return add(a, b); }
inline BlockOperator operator-(const BlockOperator& a, const BlockOperator& b) { return add(a, scale(b, -1.0)); }
inline BlockOperator operator*(double s, const BlockOperator& a) { return scale(a, s); }

// Weak derivative with interface value {u} + alpha [u]:
//   (D_a u, phi) = -(u, phi_x) + (u^ phi^-)_{j+1/2} - (u^ phi^+)_{j-1/2}.
BlockOperator assemble_D(const SpacePtr& space, double alpha);
// Jump lift: (L u, phi) = [u]_{j+1/2} phi^-_{j+1/2} - [u]_{j-1/2} phi^+_{j-1/2}.
BlockOperator assemble_L(const SpacePtr& space);

// Factorized inverse of a BlockOperator, in one of three flavours.
class LinearSolver {
 public:
  enum class Kind { full, zero_mean, pseudo_inverse };

  Vec solve(const Vec& b) const;
  Kind kind() const { return kind_; }
  Eigen::Index size() const { return n_; }
  // Pseudo-inverse only: orthonormal bases of the right / left kernels.
  const Eigen::MatrixXd& kernel() const { return right_kernel_; }
  const Eigen::MatrixXd& left_kernel() const { return left_kernel_; }

 private:
  friend LinearSolver factorize(const BlockOperator&);
  friend LinearSolver zero_mean_inverse(const BlockOperator&);
  friend LinearSolver pseudo_inverse(const BlockOperator&);

  Kind kind_ = Kind::full;
  Eigen::Index n_ = 0;
  std::shared_ptr<Eigen::SparseLU<SpMat>> lu_;
  SpacePtr space_;
  Eigen::Index dropped_ = -1;  // zero_mean: deflated degree of freedom
  Vec unit_constant_;          // zero_mean: normalized coefficients of 1
  Eigen::MatrixXd right_kernel_, left_kernel_;
};

// Direct sparse LU; throws SingularMatrixError when the relative pivot is below 1e-12.
LinearSolver factorize(const BlockOperator& op);
// For operators whose kernel is exactly the constants: solves on zero-mean data,
// returning the zero-mean solution (drops the last cell's mean mode).
LinearSolver zero_mean_inverse(const BlockOperator& op);
// Moore-Penrose inverse for operators with a small, numerically detected kernel.
LinearSolver pseudo_inverse(const BlockOperator& op);

// Orthonormal basis of ker(op) (or of ker(op^T) when `left`), by shifted block inverse iteration.
Eigen::MatrixXd null_space(const BlockOperator& op, bool left = false, int max_dim = 6);

}  // namespace msdg
