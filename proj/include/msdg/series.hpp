#pragma once

// Truncated Taylor series in time carrying first-order tangent directions.
// Coefficient (i, d): i = time order (Taylor coefficient, i.e. i-th derivative / i!),
// d = 0 for the base trajectory, d = 1..D for tangent directions (eps_a eps_b = 0).
// A series of order 0 with no directions is just a vector, so one templated code
// path serves plain right-hand-side evaluation, exact tangent (variational) dynamics
// and the time derivatives needed by the conservation checks.

#include <Eigen/Dense>
#include <algorithm>
#include <stdexcept>
#include <vector>

#include "msdg/dg_space.hpp"
#include "msdg/operators.hpp"

namespace msdg {

template <class V>
class Series {
 public:
  Series() = default;
  Series(int order, int ndir, Eigen::Index n)
      : order_(order), ndir_(ndir), c_(static_cast<size_t>((order + 1) * (ndir + 1)), V::Zero(n)) {}
  explicit Series(const V& base) : order_(0), ndir_(0), c_{base} {}

  int order() const { return order_; }
  int ndir() const { return ndir_; }
  Eigen::Index size() const { return c_.empty() ? 0 : c_[0].size(); }

  V& operator()(int i, int d) { return c_[static_cast<size_t>(i * (ndir_ + 1) + d)]; }
  const V& operator()(int i, int d) const { return c_[static_cast<size_t>(i * (ndir_ + 1) + d)]; }
  const V& base() const { return c_[0]; }

  // Coefficient or zero when (i, d) lies outside this series.
  V get(int i, int d) const {
    if (i > order_ || d > ndir_) return V::Zero(size());
    return (*this)(i, d);
  }

  template <class F>
  auto map(F f) const {
    using W = decltype(f(c_[0]));
    Series<W> out;
    out.order_ = order_;
    out.ndir_ = ndir_;
    out.c_.reserve(c_.size());
    for (const auto& v : c_) out.c_.push_back(f(v));
    return out;
  }

  Series& operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

 private:
  template <class W>
  friend class Series;
  int order_ = 0;
  int ndir_ = 0;
  std::vector<V> c_;
};

using Jet = Series<Vec>;
using NodalJet = Series<Arr>;

namespace detail {
template <class V, class Op>
Series<V> combine(const Series<V>& a, const Series<V>& b, Op op) {
  const int order = std::min(a.order(), b.order());
  const int nd = std::max(a.ndir(), b.ndir());
  Series<V> out(order, nd, std::max(a.size(), b.size()));
  for (int i = 0; i <= order; ++i)
    for (int d = 0; d <= nd; ++d) out(i, d) = op(a.get(i, d), b.get(i, d));
  return out;
}
}  // namespace detail

template <class V>
Series<V> operator+(const Series<V>& a, const Series<V>& b) {
  return detail::combine(a, b, [](const V& x, const V& y) -> V { return x + y; });
}
template <class V>
Series<V> operator-(const Series<V>& a, const Series<V>& b) {
  return detail::combine(a, b, [](const V& x, const V& y) -> V { return x - y; });
}
template <class V>
Series<V> operator-(const Series<V>& a) {
  return a.map([](const V& x) -> V { return -x; });
}
template <class V>
Series<V> operator*(double s, const Series<V>& a) {
  return a.map([s](const V& x) -> V { return s * x; });
}

// Pointwise product of nodal series (Leibniz rule in time, first order in tangents).
inline NodalJet operator*(const NodalJet& a, const NodalJet& b) {
  const int order = std::min(a.order(), b.order());
  const int nd = std::max(a.ndir(), b.ndir());
  NodalJet out(order, nd, std::max(a.size(), b.size()));
  for (int i = 0; i <= order; ++i)
    for (int p = 0; p <= i; ++p) {
      const Arr a0 = a.get(p, 0), b0 = b.get(i - p, 0);
      out(i, 0) += a0 * b0;
      for (int d = 1; d <= nd; ++d) out(i, d) += a0 * b.get(i - p, d) + a.get(p, d) * b0;
    }
  return out;
}

inline NodalJet add_constant(NodalJet a, double c) {
  a(0, 0) += c;
  return a;
}

// p(u) = sum_i coeffs[i] u^i by Horner's rule.
inline NodalJet polynomial(const NodalJet& u, const std::vector<double>& coeffs) {
  NodalJet r(u.order(), u.ndir(), u.size());
  if (coeffs.empty()) return r;
  r = add_constant(r, coeffs.back());
  for (int i = static_cast<int>(coeffs.size()) - 2; i >= 0; --i) r = add_constant(r * u, coeffs[i]);
  return r;
}

inline Jet apply(const BlockOperator& op, const Jet& x) {
  return x.map([&](const Vec& v) -> Vec { return op.apply(v); });
}
inline Jet solve(const LinearSolver& s, const Jet& x) {
  return x.map([&](const Vec& v) -> Vec { return s.solve(v); });
}
inline NodalJet to_nodal(const DgSpace& sp, const Jet& x) {
  return x.map([&](const Vec& v) -> Arr { return sp.to_nodal(v); });
}
inline Jet from_nodal(const DgSpace& sp, const NodalJet& x) {
  return x.map([&](const Arr& v) -> Vec { return sp.from_nodal(v); });
}

// d/dt of a truncated series (one order lower).
template <class V>
Series<V> derivative(const Series<V>& a) {
  if (a.order() < 1) throw std::logic_error("derivative: series has order 0");
  Series<V> out(a.order() - 1, a.ndir(), a.size());
  for (int i = 0; i < a.order(); ++i)
    for (int d = 0; d <= a.ndir(); ++d) out(i, d) = (i + 1.0) * a(i + 1, d);
  return out;
}

template <class V>
Series<V> truncate(const Series<V>& a, int order) {
  Series<V> out(std::min(order, a.order()), a.ndir(), a.size());
  for (int i = 0; i <= out.order(); ++i)
    for (int d = 0; d <= a.ndir(); ++d) out(i, d) = a(i, d);
  return out;
}

inline Jet segment(const Jet& a, Eigen::Index start, Eigen::Index len) {
  return a.map([&](const Vec& v) -> Vec { return v.segment(start, len); });
}

inline Jet concat(const std::vector<Jet>& parts) {
  int order = parts.front().order(), nd = 0;
  Eigen::Index n = 0;
  for (const auto& p : parts) {
    order = std::min(order, p.order());
    nd = std::max(nd, p.ndir());
    n += p.size();
  }
  Jet out(order, nd, n);
  for (int i = 0; i <= order; ++i)
    for (int d = 0; d <= nd; ++d) {
      Eigen::Index off = 0;
      for (const auto& p : parts) {
        out(i, d).segment(off, p.size()) = p.get(i, d);
        off += p.size();
      }
    }
  return out;
}

}  // namespace msdg
