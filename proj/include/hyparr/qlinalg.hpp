#pragma once

#include <Eigen/Core>

#include <optional>
#include <vector>

#include "hyparr/rational.hpp"
#include "hyparr/util.hpp"

// Exact dense linear algebra over the rationals. Everything here is a pure
// free function on Eigen dense types; elimination uses the first nonzero
// pivot in row-major scan order so results are reproducible byte for byte.

namespace hyparr {

template <typename Scalar>
using DenseMat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using DenseVec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Mat = DenseMat<Rational>;
using Vec = DenseVec<Rational>;
using RowVec = Eigen::Matrix<Rational, 1, Eigen::Dynamic>;

template <typename S>
bool mats_equal(const DenseMat<S>& a, const DenseMat<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!(a(i, j) == b(i, j))) return false;
  return true;
}

template <typename S>
bool is_zero_mat(const DenseMat<S>& a) {
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!(a(i, j) == S(0))) return false;
  return true;
}

/// Rank over Q by fraction-free (Bareiss) elimination.
template <typename S>
Eigen::Index rank(DenseMat<S> m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  Eigen::Index r = 0;
  S prev(1);
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < rows; ++i)
      if (!(m(i, c) == S(0))) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r) m.row(piv).swap(m.row(r));
    const S p = m(r, c);
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      for (Eigen::Index j = c + 1; j < cols; ++j)
        m(i, j) = (m(i, j) * p - m(i, c) * m(r, j)) / prev;
      m(i, c) = S(0);
    }
    prev = p;
    ++r;
  }
  return r;
}

/// Sign of det(m) for square m: -1, 0 or +1.
template <typename S>
int det_sign(DenseMat<S> m) {
  if (m.rows() != m.cols()) throw DomainError("det_sign: matrix not square");
  const Eigen::Index n = m.rows();
  int swaps = 0;
  S prev(1);
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = c; i < n; ++i)
      if (!(m(i, c) == S(0))) { piv = i; break; }
    if (piv < 0) return 0;
    if (piv != c) { m.row(piv).swap(m.row(c)); ++swaps; }
    const S p = m(c, c);
    for (Eigen::Index i = c + 1; i < n; ++i) {
      for (Eigen::Index j = c + 1; j < n; ++j)
        m(i, j) = (m(i, j) * p - m(i, c) * m(c, j)) / prev;
      m(i, c) = S(0);
    }
    prev = p;
  }
  int s = m(n - 1, n - 1) > S(0) ? 1 : -1;  // Bareiss: last entry is det up to swaps
  return (swaps % 2 == 0) ? s : -s;
}

template <typename S>
struct RrefResult {
  DenseMat<S> r;
  std::vector<Eigen::Index> pivots;  // pivot column per pivot row
};

/// Reduced row echelon form, first-nonzero pivoting.
template <typename S>
RrefResult<S> rref(DenseMat<S> m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  std::vector<Eigen::Index> pivots;
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index piv = -1;
    for (Eigen::Index i = r; i < rows; ++i)
      if (!(m(i, c) == S(0))) { piv = i; break; }
    if (piv < 0) continue;
    if (piv != r) m.row(piv).swap(m.row(r));
    const S p = m(r, c);
    for (Eigen::Index j = c; j < cols; ++j) m(r, j) = m(r, j) / p;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r) continue;
      const S f = m(i, c);
      if (f == S(0)) continue;
      for (Eigen::Index j = c; j < cols; ++j) m(i, j) = m(i, j) - f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

/// Columns form the deterministic (reduced column echelon) basis of
/// { x : m x = 0 }. Column count = cols - rank.
template <typename S>
DenseMat<S> kernel_basis(const DenseMat<S>& m) {
  const Eigen::Index cols = m.cols();
  auto e = rref(m);
  const Eigen::Index rk = static_cast<Eigen::Index>(e.pivots.size());
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivots) is_pivot[static_cast<std::size_t>(c)] = true;
  DenseMat<S> k(cols, cols - rk);
  k.setConstant(S(0));
  Eigen::Index kc = 0;
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (is_pivot[static_cast<std::size_t>(c)]) continue;
    k(c, kc) = S(1);
    for (Eigen::Index pr = 0; pr < rk; ++pr) k(e.pivots[static_cast<std::size_t>(pr)], kc) = -e.r(pr, c);
    ++kc;
  }
  return k;
}

/// Full-row-rank matrix P with P m = 0 presenting coker(m) = Q^rows / im(m),
/// in reduced row echelon form. Row count = rows - rank.
template <typename S>
DenseMat<S> cokernel_projection(const DenseMat<S>& m) {
  DenseMat<S> left = kernel_basis(DenseMat<S>(m.transpose())).transpose();
  return rref(left).r;
}

/// Solves a x = b exactly for each column of b; throws if inconsistent.
/// When the system is underdetermined, free variables are set to zero.
template <typename S>
DenseMat<S> solve(const DenseMat<S>& a, const DenseMat<S>& b) {
  if (a.rows() != b.rows()) throw DomainError("solve: row mismatch");
  DenseMat<S> aug(a.rows(), a.cols() + b.cols());
  aug.leftCols(a.cols()) = a;
  aug.rightCols(b.cols()) = b;
  auto e = rref(aug);
  DenseMat<S> x(a.cols(), b.cols());
  x.setConstant(S(0));
  for (std::size_t pr = 0; pr < e.pivots.size(); ++pr) {
    Eigen::Index c = e.pivots[pr];
    if (c >= a.cols()) throw DomainError("solve: inconsistent linear system");
    for (Eigen::Index j = 0; j < b.cols(); ++j) x(c, j) = e.r(static_cast<Eigen::Index>(pr), a.cols() + j);
  }
  return x;
}

/// A right inverse R of a full-row-rank matrix p (p R = id).
template <typename S>
DenseMat<S> right_inverse(const DenseMat<S>& p) {
  DenseMat<S> id(p.rows(), p.rows());
  id.setConstant(S(0));
  for (Eigen::Index i = 0; i < p.rows(); ++i) id(i, i) = S(1);
  return solve(p, id);
}

inline Mat identity_mat(Eigen::Index n) {
  Mat m(n, n);
  m.setConstant(Rational(0));
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = Rational(1);
  return m;
}

inline Mat zero_mat(Eigen::Index r, Eigen::Index c) {
  Mat m(r, c);
  m.setConstant(Rational(0));
  return m;
}

/// Is x in the column span of basis?
template <typename S>
bool in_span(const DenseMat<S>& basis, const DenseVec<S>& x) {
  DenseMat<S> aug(basis.rows(), basis.cols() + 1);
  aug.leftCols(basis.cols()) = basis;
  aug.col(basis.cols()) = x;
  return rank(aug) == rank(DenseMat<S>(basis));
}

}  // namespace hyparr
