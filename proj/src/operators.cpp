#include "msdg/operators.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "msdg/errors.hpp"

namespace msdg {

BlockOperator::BlockOperator(SpacePtr space, SpMat m) : space_(std::move(space)), m_(std::move(m)) {
  if (m_.rows() != space_->dofs() || m_.cols() != space_->dofs())
    throw DimensionError("BlockOperator: matrix size does not match the space");
  m_.makeCompressed();
}

BlockOperator BlockOperator::identity(const SpacePtr& space) {
  SpMat I(space->dofs(), space->dofs());
  I.setIdentity();
  return {space, I};
}

BlockOperator BlockOperator::zero(const SpacePtr& space) { return {space, SpMat(space->dofs(), space->dofs())}; }

Vec BlockOperator::apply(const Vec& u) const {
  if (u.size() != size()) throw DimensionError("BlockOperator::apply: size mismatch");
  return m_ * u;
}

BlockOperator BlockOperator::transpose() const { return {space_, SpMat(m_.transpose())}; }

Eigen::MatrixXd BlockOperator::block(int row, int col) const {
  const int nb = space_->modes();
  return dense().block(row * nb, col * nb, nb, nb);
}

int BlockOperator::bandwidth() const {
  const int nb = space_->modes(), N = space_->cells();
  int bw = 0;
  for (int c = 0; c < m_.outerSize(); ++c)
    for (SpMat::InnerIterator it(m_, c); it; ++it) {
      if (it.value() == 0.0) continue;
      const int d = std::abs(static_cast<int>(it.row()) / nb - static_cast<int>(it.col()) / nb);
      bw = std::max(bw, std::min(d, N - d));
    }
  return bw;
}

namespace {

void check_same(const BlockOperator& a, const BlockOperator& b) {
  if (a.space() != b.space() &&
      (a.size() != b.size() || a.space()->degree() != b.space()->degree() ||
       a.space()->mesh().edges() != b.space()->mesh().edges()))
    throw DimensionError("operator algebra: mesh/degree mismatch");
}

}  // namespace

BlockOperator compose(const BlockOperator& a, const BlockOperator& b) {
  check_same(a, b);
  return {a.space(), SpMat((a.matrix() * b.matrix()).pruned())};
}

BlockOperator add(const BlockOperator& a, const BlockOperator& b) {
  check_same(a, b);
  return {a.space(), SpMat(a.matrix() + b.matrix())};
}

BlockOperator scale(const BlockOperator& a, double s) { return {a.space(), SpMat(s * a.matrix())}; }

BlockOperator shift_identity(const BlockOperator& a, double c) {
  return add(a, scale(BlockOperator::identity(a.space()), c));
}

namespace {

using Trip = Eigen::Triplet<double>;

void push_block(std::vector<Trip>& t, int nb, int rc, int cc, const Eigen::MatrixXd& B) {
  for (int l = 0; l < nb; ++l)
    for (int i = 0; i < nb; ++i)
      if (B(l, i) != 0.0) t.emplace_back(rc * nb + l, cc * nb + i, B(l, i));
}

// Reference stiffness S(l, i) = int phat_i phat_l' dxi (exact with >= k+1 points).
Eigen::MatrixXd reference_stiffness(const DgSpace& s) {
  const auto& q = s.quad();
  return s.ref_derivs() * q.weights.asDiagonal() * s.ref_values().transpose();
}

}  // namespace

BlockOperator assemble_D(const SpacePtr& sp, double alpha) {
  if (!(std::abs(alpha) <= 10.0)) throw ConfigError("assemble_D: |alpha| exceeds the sanity bound 10");
  const DgSpace& s = *sp;
  const int N = s.cells(), nb = s.modes();
  const Eigen::MatrixXd S = reference_stiffness(s);
  std::vector<Trip> t;
  t.reserve(static_cast<size_t>(3) * N * nb * nb);
  for (int j = 0; j < N; ++j) {
    const int jr = (j + 1) % N, jl = (j - 1 + N) % N;
    const Vec R = s.basis_right(j), Lf = s.basis_left(j);
    const Eigen::MatrixXd diag = -(2.0 / s.mesh().width(j)) * S + (0.5 - alpha) * R * R.transpose() -
                                 (0.5 + alpha) * Lf * Lf.transpose();
    push_block(t, nb, j, j, diag);
    push_block(t, nb, j, jr, (0.5 + alpha) * R * s.basis_left(jr).transpose());
    push_block(t, nb, j, jl, -(0.5 - alpha) * Lf * s.basis_right(jl).transpose());
  }
  SpMat m(s.dofs(), s.dofs());
  m.setFromTriplets(t.begin(), t.end());
  return {sp, m};
}

BlockOperator assemble_L(const SpacePtr& sp) {
  const DgSpace& s = *sp;
  const int N = s.cells(), nb = s.modes();
  std::vector<Trip> t;
  for (int j = 0; j < N; ++j) {
    const int jr = (j + 1) % N, jl = (j - 1 + N) % N;
    const Vec R = s.basis_right(j), Lf = s.basis_left(j);
    push_block(t, nb, j, j, -R * R.transpose() - Lf * Lf.transpose());
    push_block(t, nb, j, jr, R * s.basis_left(jr).transpose());
    push_block(t, nb, j, jl, Lf * s.basis_right(jl).transpose());
  }
  SpMat m(s.dofs(), s.dofs());
  m.setFromTriplets(t.begin(), t.end());
  return {sp, m};
}

// ---------------------------------------------------------------- solvers

namespace {

double norm_inf(const SpMat& a) {
  Vec rs = Vec::Zero(a.rows());
  for (int c = 0; c < a.outerSize(); ++c)
    for (SpMat::InnerIterator it(a, c); it; ++it) rs[it.row()] += std::abs(it.value());
  return rs.size() ? rs.maxCoeff() : 0.0;
}

Vec probe_vector(Eigen::Index n, unsigned seed) {
  std::mt19937_64 g(seed);
  std::normal_distribution<double> d;
  Vec v(n);
  for (auto& x : v) x = d(g);
  return v;
}

std::shared_ptr<Eigen::SparseLU<SpMat>> lu_or_throw(const SpMat& a, const char* who) {
  auto lu = std::make_shared<Eigen::SparseLU<SpMat>>();
  lu->analyzePattern(a);
  lu->factorize(a);
  if (lu->info() != Eigen::Success) {
    std::ostringstream os;
    os << who << ": singular matrix (zero pivot)";
    throw SingularMatrixError(os.str(), 0.0);
  }
  // Inverse power iteration estimates the smallest singular value relative to ||A||.
  const double na = norm_inf(a);
  Vec x = probe_vector(a.rows(), 7);
  x.normalize();
  double growth = 0;
  for (int it = 0; it < 6; ++it) {
    Vec y = lu->solve(x);
    const double ny = y.norm();
    if (!std::isfinite(ny)) {
      growth = INFINITY;
      break;
    }
    growth = std::max(growth, ny);
    x = y / ny;
  }
  const double rel = (growth > 0 && na > 0) ? 1.0 / (growth * na) : 0.0;
  if (!(rel >= 1e-12)) {
    std::ostringstream os;
    os << who << ": matrix is numerically singular (relative pivot ~ " << rel << ")";
    throw SingularMatrixError(os.str(), rel);
  }
  return lu;
}

}  // namespace

LinearSolver factorize(const BlockOperator& op) {
  LinearSolver s;
  s.kind_ = LinearSolver::Kind::full;
  s.n_ = op.size();
  s.space_ = op.space();
  s.lu_ = lu_or_throw(op.matrix(), "factorize");
  return s;
}

LinearSolver zero_mean_inverse(const BlockOperator& op) {
  LinearSolver s;
  s.kind_ = LinearSolver::Kind::zero_mean;
  s.n_ = op.size();
  s.space_ = op.space();
  const int nb = op.space()->modes();
  s.dropped_ = static_cast<Eigen::Index>(op.space()->cells() - 1) * nb;
  s.unit_constant_ = op.space()->constant(1.0).normalized();
  const Eigen::Index n = s.n_, d = s.dropped_;
  std::vector<Eigen::Triplet<double>> t;
  const SpMat& m = op.matrix();
  for (int c = 0; c < m.outerSize(); ++c)
    for (SpMat::InnerIterator it(m, c); it; ++it) {
      if (it.row() == d || it.col() == d) continue;
      t.emplace_back(it.row() - (it.row() > d), it.col() - (it.col() > d), it.value());
    }
  SpMat r(n - 1, n - 1);
  r.setFromTriplets(t.begin(), t.end());
  s.lu_ = lu_or_throw(r, "zero_mean_inverse");
  return s;
}

Eigen::MatrixXd null_space(const BlockOperator& op, bool left, int max_dim) {
  const SpMat a = left ? SpMat(op.matrix().transpose()) : op.matrix();
  const Eigen::Index n = a.rows();
  const double na = norm_inf(a);
  if (na == 0.0) return Eigen::MatrixXd::Identity(n, n);
  const int p = static_cast<int>(std::min<Eigen::Index>(max_dim, n));
  SpMat I(n, n);
  I.setIdentity();
  const SpMat shifted = a + (1e-9 * na) * I;
  Eigen::SparseLU<SpMat> lu;
  lu.analyzePattern(shifted);
  lu.factorize(shifted);
  if (lu.info() != Eigen::Success) throw SingularMatrixError("null_space: shifted factorization failed", 0.0);
  Eigen::MatrixXd Y(n, p);
  for (int c = 0; c < p; ++c) Y.col(c) = probe_vector(n, 100 + c);
  for (int it = 0; it < 4; ++it) {
    Y = lu.solve(Y).eval();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Y);
    Y = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);
  }
  const Eigen::MatrixXd AY = a * Y;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(AY, Eigen::ComputeThinV);
  const Vec sv = svd.singularValues();
  std::vector<int> keep;
  for (int c = 0; c < sv.size(); ++c)
    if (sv[c] < 1e-8 * na) keep.push_back(c);
  Eigen::MatrixXd K(n, static_cast<Eigen::Index>(keep.size()));
  for (size_t c = 0; c < keep.size(); ++c) K.col(c) = Y * svd.matrixV().col(keep[c]);
  if (K.cols() > 0) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(K);
    K = qr.householderQ() * Eigen::MatrixXd::Identity(n, K.cols());
  }
  return K;
}

LinearSolver pseudo_inverse(const BlockOperator& op) {
  LinearSolver s;
  s.kind_ = LinearSolver::Kind::pseudo_inverse;
  s.n_ = op.size();
  s.space_ = op.space();
  s.right_kernel_ = null_space(op, false);
  s.left_kernel_ = null_space(op, true);
  const Eigen::Index n = s.n_, r = s.right_kernel_.cols();
  if (s.left_kernel_.cols() != r) throw SingularMatrixError("pseudo_inverse: left/right kernel dimensions differ", 0.0);
  // Bordered system [A Y; X^T 0][x; l] = [b; 0] yields x = A^+ b.
  std::vector<Eigen::Triplet<double>> t;
  const SpMat& m = op.matrix();
  for (int c = 0; c < m.outerSize(); ++c)
    for (SpMat::InnerIterator it(m, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  for (Eigen::Index c = 0; c < r; ++c)
    for (Eigen::Index i = 0; i < n; ++i) {
      if (s.left_kernel_(i, c) != 0.0) t.emplace_back(i, n + c, s.left_kernel_(i, c));
      if (s.right_kernel_(i, c) != 0.0) t.emplace_back(n + c, i, s.right_kernel_(i, c));
    }
  SpMat b(n + r, n + r);
  b.setFromTriplets(t.begin(), t.end());
  s.lu_ = lu_or_throw(b, "pseudo_inverse");
  return s;
}

Vec LinearSolver::solve(const Vec& b) const {
  if (b.size() != n_) throw DimensionError("LinearSolver::solve: size mismatch");
  switch (kind_) {
    case Kind::full:
      return lu_->solve(b);
    case Kind::zero_mean: {
      const double bn = b.norm();
      const double m = unit_constant_.dot(b);
      if (std::abs(m) > 1e-10 * std::max(bn, 1e-300) && bn > 0)
        throw InconsistentRhsError("zero_mean_inverse: right-hand side has nonzero mean", m);
      Vec br(n_ - 1);
      br.head(dropped_) = b.head(dropped_);
      br.tail(n_ - 1 - dropped_) = b.tail(n_ - 1 - dropped_);
      const Vec xr = lu_->solve(br);
      Vec x(n_);
      x.head(dropped_) = xr.head(dropped_);
      x[dropped_] = 0.0;
      x.tail(n_ - 1 - dropped_) = xr.tail(n_ - 1 - dropped_);
      // restore the dropped mean mode from the zero-average condition
      x -= unit_constant_.dot(x) * unit_constant_;
      return x;
    }
    case Kind::pseudo_inverse: {
      const Eigen::Index r = right_kernel_.cols();
      Vec bb = Vec::Zero(n_ + r);
      bb.head(n_) = b;
      return lu_->solve(bb).head(n_);
    }
  }
  return {};
}

}  // namespace msdg
