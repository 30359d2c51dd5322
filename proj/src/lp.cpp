#include "hyparr/lp.hpp"

#include <vector>

namespace hyparr {

namespace {

// Dense phase-1 simplex tableau with Bland's rule (anti-cycling). All
// arithmetic is exact, so termination gives a certificate either way.
class Phase1 {
 public:
  Phase1(const Mat& a, const Vec& b) : m_(a.rows()), n_(a.cols()) {
    tab_ = zero_mat(m_ + 1, n_ + m_ + 1);
    tab_.block(0, 0, m_, n_) = a;
    for (Eigen::Index i = 0; i < m_; ++i) {
      tab_(i, n_ + i) = Rational(1);
      tab_(i, n_ + m_) = b(i);
      basis_.push_back(n_ + i);
    }
    // Objective row: reduced costs for minimizing the artificial sum.
    for (Eigen::Index j = 0; j < n_; ++j) {
      Rational s(0);
      for (Eigen::Index i = 0; i < m_; ++i) s += tab_(i, j);
      tab_(m_, j) = -s;
    }
    Rational rhs(0);
    for (Eigen::Index i = 0; i < m_; ++i) rhs += tab_(i, n_ + m_);
    tab_(m_, n_ + m_) = -rhs;
  }

  /// Runs to optimality; returns true iff the artificial objective is zero.
  bool solve() {
    for (;;) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < n_ + m_; ++j) {
        if (tab_(m_, j) < Rational(0)) { enter = j; break; }
      }
      if (enter < 0) break;
      Eigen::Index leave = -1;
      Rational best(0);
      for (Eigen::Index i = 0; i < m_; ++i) {
        if (!(tab_(i, enter) > Rational(0))) continue;
        Rational ratio = tab_(i, n_ + m_) / tab_(i, enter);
        if (leave < 0 || ratio < best || (ratio == best && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave < 0) throw DomainError("phase-1 simplex unbounded (internal)");
      pivot(leave, enter);
    }
    return tab_(m_, n_ + m_) == Rational(0);
  }

  Rational value_of(Eigen::Index var) const {
    for (Eigen::Index i = 0; i < m_; ++i)
      if (basis_[static_cast<std::size_t>(i)] == var) return tab_(i, n_ + m_);
    return Rational(0);
  }

 private:
  void pivot(Eigen::Index row, Eigen::Index col) {
    const Rational p = tab_(row, col);
    for (Eigen::Index j = 0; j < tab_.cols(); ++j) tab_(row, j) = tab_(row, j) / p;
    for (Eigen::Index i = 0; i < tab_.rows(); ++i) {
      if (i == row) continue;
      const Rational f = tab_(i, col);
      if (f == Rational(0)) continue;
      for (Eigen::Index j = 0; j < tab_.cols(); ++j) tab_(i, j) = tab_(i, j) - f * tab_(row, j);
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  Eigen::Index m_, n_;
  Mat tab_;
  std::vector<Eigen::Index> basis_;
};

Vec scale_to_integers(Vec v) {
  mpz_class l(1);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    mpz_class den = v(i).denominator();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
    l = l / g * den;
  }
  if (l != 1) {
    Rational f{mpq_class(l)};
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = v(i) * f;
  }
  mpz_class g(0);
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    mpz_class num = v(i).numerator();
    mpz_class a = ::abs(num);
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  }
  if (g > 1) {
    Rational f{mpq_class(g)};
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = v(i) / f;
  }
  return v;
}

}  // namespace

std::optional<Vec> feasible_point(const ConeSystem& sys) {
  const Eigen::Index n = sys.dim;
  const Eigen::Index e = sys.equalities.rows();
  const Eigen::Index s = sys.stricts.rows();
  const Eigen::Index ns = sys.nonstricts.rows();
  if (n == 0) {
    if (s > 0) return std::nullopt;
    return Vec(0);
  }
  if (e == 0 && s == 0 && ns == 0) {
    Vec zero = Vec::Constant(n, Rational(0));
    return zero;
  }
  // Variables: p (n), q (n), surplus for stricts (s), surplus for nonstricts (ns).
  const Eigen::Index nv = 2 * n + s + ns;
  const Eigen::Index m = e + s + ns;
  Mat a = zero_mat(m, nv);
  Vec b = Vec::Constant(m, Rational(0));
  for (Eigen::Index i = 0; i < e; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = sys.equalities(i, j);
      a(i, n + j) = -sys.equalities(i, j);
    }
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(e + i, j) = sys.stricts(i, j);
      a(e + i, n + j) = -sys.stricts(i, j);
    }
    a(e + i, 2 * n + i) = Rational(-1);
    b(e + i) = Rational(1);
  }
  for (Eigen::Index i = 0; i < ns; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      a(e + s + i, j) = sys.nonstricts(i, j);
      a(e + s + i, n + j) = -sys.nonstricts(i, j);
    }
    a(e + s + i, 2 * n + s + i) = Rational(-1);
  }
  // Rows with b = 0 need artificial sign consistency; b >= 0 already holds.
  Phase1 simplex(a, b);
  if (!simplex.solve()) return std::nullopt;
  Vec x(n);
  for (Eigen::Index j = 0; j < n; ++j) x(j) = simplex.value_of(j) - simplex.value_of(n + j);
  x = scale_to_integers(x);
  // Certificate: re-check the witness against the original system.
  for (Eigen::Index i = 0; i < e; ++i) {
    Rational v(0);
    for (Eigen::Index j = 0; j < n; ++j) v += sys.equalities(i, j) * x(j);
    if (!v.is_zero()) throw DomainError("feasible_point: witness violates equality (internal)");
  }
  for (Eigen::Index i = 0; i < s; ++i) {
    Rational v(0);
    for (Eigen::Index j = 0; j < n; ++j) v += sys.stricts(i, j) * x(j);
    if (!(v > Rational(0))) throw DomainError("feasible_point: witness violates strict inequality (internal)");
  }
  for (Eigen::Index i = 0; i < ns; ++i) {
    Rational v(0);
    for (Eigen::Index j = 0; j < n; ++j) v += sys.nonstricts(i, j) * x(j);
    if (v < Rational(0)) throw DomainError("feasible_point: witness violates inequality (internal)");
  }
  return x;
}

}  // namespace hyparr
