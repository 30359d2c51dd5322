#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "corpus.hpp"
#include "oracles.hpp"

#include "hyparr/chain_complex.hpp"

using namespace hyparr;
using corpus::mk;

TEST_CASE("rational literals are canonical") {
  CHECK(Rational::from_string("2/4").str() == "1/2");
  CHECK(Rational::from_string("-6/4").str() == "-3/2");
  CHECK(Rational::from_string("7").str() == "7");
  CHECK(Rational::from_string("0/5").str() == "0");
  CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK(Rational(-1, 2).denominator() == 2);  // denominator stays positive
  CHECK_THROWS_AS(Rational::from_string("1/0"), FormatError);
  CHECK_THROWS_AS(Rational::from_string("a"), FormatError);
  CHECK_THROWS_AS(Rational::from_string("1/2/3"), FormatError);
  CHECK_THROWS_AS(Rational::from_string(""), FormatError);
  CHECK_THROWS_AS(Rational(1, 0), DomainError);
  CHECK_THROWS_AS(Rational(1) / Rational(0), DomainError);
}

TEST_CASE("rank on pinned examples") {
  CHECK(rank(zero_mat(3, 3)) == 0);
  CHECK(rank(identity_mat(3)) == 3);
  CHECK(rank(mk(2, 2, {1, 2, 2, 4})) == 1);
}

TEST_CASE("rank agrees with the minor-expansion oracle") {
  // Deterministic small matrices with mixed entries.
  std::vector<Mat> cases;
  cases.push_back(mk(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9}));
  cases.push_back(mk(3, 4, {0, 1, -1, 2, 2, 0, 2, -2, 1, 1, 0, 0}));
  cases.push_back(mk(4, 3, {1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 1}));
  cases.push_back(mk(4, 4, {2, 0, 0, 1, 0, 2, 1, 0, 0, 1, 2, 0, 1, 0, 0, 2}));
  cases.push_back(zero_mat(2, 5));
  Mat frac(2, 2);
  frac(0, 0) = Rational(1, 2);
  frac(0, 1) = Rational(1, 3);
  frac(1, 0) = Rational(3, 2);
  frac(1, 1) = Rational(1, 1);
  cases.push_back(frac);
  for (const auto& m : cases) CHECK(rank(m) == oracles::rank_by_minors(m));
}

TEST_CASE("kernel bases are deterministic and exact") {
  CHECK(kernel_basis(identity_mat(2)).cols() == 0);
  Mat row = mk(1, 2, {0, 1});
  Mat k = kernel_basis(row);
  REQUIRE(k.cols() == 1);
  CHECK(k(0, 0) == Rational(1));
  CHECK(k(1, 0) == Rational(0));
  Mat ones = mk(1, 2, {1, 1});
  Mat k2 = kernel_basis(ones);
  REQUIRE(k2.cols() == 1);
  CHECK(k2(0, 0) == Rational(-1));
  CHECK(k2(1, 0) == Rational(1));
  for (const auto& m : {mk(2, 3, {1, 2, 3, 2, 4, 6}), mk(3, 3, {1, 1, 0, 0, 1, 1, 1, 2, 1})}) {
    Mat kb = kernel_basis(m);
    CHECK(rank(m) + kb.cols() == m.cols());
    CHECK(is_zero_mat(Mat(m * kb)));
  }
}

TEST_CASE("cokernel presentations") {
  CHECK(cokernel_projection(identity_mat(2)).rows() == 0);
  Mat col = mk(2, 1, {1, 1});
  Mat p = cokernel_projection(col);
  REQUIRE(p.rows() == 1);
  CHECK(p(0, 0) == Rational(1));
  CHECK(p(0, 1) == Rational(-1));
  CHECK(mats_equal(cokernel_projection(zero_mat(2, 2)), identity_mat(2)));
  for (const auto& m : {mk(3, 2, {1, 0, 1, 1, 0, 1}), mk(3, 3, {1, 2, 3, 4, 5, 6, 7, 8, 9})}) {
    Mat pr = cokernel_projection(m);
    CHECK(pr.rows() == m.rows() - rank(m));
    CHECK(is_zero_mat(Mat(pr * m)));
    CHECK(rank(pr) == pr.rows());
  }
}

TEST_CASE("solve certifies inconsistency") {
  Mat a = mk(2, 2, {1, 1, 2, 2});
  Mat good = mk(2, 1, {1, 2});
  Mat x = solve(a, good);
  CHECK(mats_equal(Mat(a * x), good));
  Mat bad = mk(2, 1, {1, 3});
  CHECK_THROWS_AS(solve(a, bad), DomainError);
}

namespace {

ChainComplex simple_complex(std::vector<Eigen::Index> dims, std::vector<Mat> diffs, int lowest = 0) {
  ChainComplex c;
  c.lowest_degree = lowest;
  for (std::size_t i = 0; i < dims.size(); ++i) c.terms.push_back({Summand{"t" + std::to_string(i), dims[i]}});
  c.diffs = std::move(diffs);
  return c;
}

}  // namespace

TEST_CASE("complex_check") {
  CHECK(complex_check(simple_complex({2}, {})));
  CHECK_FALSE(complex_check(simple_complex({1, 1, 1}, {identity_mat(1), identity_mat(1)})));
  CHECK(complex_check(simple_complex({1, 1, 1}, {identity_mat(1), zero_mat(1, 1)})));
  CHECK_FALSE(complex_check(simple_complex({1, 2}, {identity_mat(1)})));  // shape mismatch
}

TEST_CASE("cohomology on pinned examples") {
  auto rep = cohomology(simple_complex({1, 1}, {identity_mat(1)}));
  CHECK(rep.total_rank() == 0);

  auto rep2 = cohomology(simple_complex({2, 3}, {zero_mat(3, 2)}));
  CHECK(rep2.rank_at(0) == 2);
  CHECK(rep2.rank_at(1) == 3);

  // One-column differential (1,-1)^T : Q -> Q^2; expectation frozen from the
  // minor-rank oracle.
  Mat d = mk(2, 1, {1, -1});
  Eigen::Index r = oracles::rank_by_minors(d);
  auto rep3 = cohomology(simple_complex({1, 2}, {d}));
  CHECK(rep3.rank_at(0) == 1 - r);
  CHECK(rep3.rank_at(1) == 2 - r);
  CHECK(rep3.rank_at(0) == 0);
  CHECK(rep3.rank_at(1) == 1);
  CHECK_THROWS_AS(cohomology(simple_complex({1, 1, 1}, {identity_mat(1), identity_mat(1)})), DomainError);
}

TEST_CASE("cohomology is stable under summand permutation") {
  // Same complex with the two degree-1 summands swapped; ranks must agree.
  ComplexBuilder b1, b2;
  auto a1 = b1.add_summand(0, "a", 1);
  auto x1 = b1.add_summand(1, "x", 1);
  auto y1 = b1.add_summand(1, "y", 2);
  b1.add_block(a1, x1, mk(1, 1, {1}));
  b1.add_block(a1, y1, mk(2, 1, {3, 4}));
  auto a2 = b2.add_summand(0, "a", 1);
  auto y2 = b2.add_summand(1, "y", 2);
  auto x2 = b2.add_summand(1, "x", 1);
  b2.add_block(a2, x2, mk(1, 1, {1}));
  b2.add_block(a2, y2, mk(2, 1, {3, 4}));
  auto r1 = cohomology(b1.build().cx);
  auto r2 = cohomology(b2.build().cx);
  CHECK(r1.ranks == r2.ranks);
}

TEST_CASE("induced maps on degree-0 cohomology") {
  // src = dst = [Q^2 -> Q], map = kernel model.
  ChainComplex c = simple_complex({2, 1}, {mk(1, 2, {1, 1})});
  ChainMap ident{0, {identity_mat(2), identity_mat(1)}};
  Mat ind = induced_h0_map(c, c, ident, H0Model::kKernel);
  CHECK(mats_equal(ind, identity_mat(1)));
  ChainMap zero{0, {zero_mat(2, 2), zero_mat(1, 1)}};
  CHECK(is_zero_mat(induced_h0_map(c, c, zero, H0Model::kKernel)));

  // Composite chain map = product of induced maps.
  ChainMap twist{0, {mk(2, 2, {0, 1, 1, 0}), identity_mat(1)}};
  Mat t = induced_h0_map(c, c, twist, H0Model::kKernel);
  ChainMap twist2{0, {Mat(twist.blocks[0] * twist.blocks[0]), identity_mat(1)}};
  Mat t2 = induced_h0_map(c, c, twist2, H0Model::kKernel);
  CHECK(mats_equal(Mat(t * t), t2));

  // Cokernel model on the mirrored complex.
  ChainComplex cc = simple_complex({1, 2}, {mk(2, 1, {1, 1})}, -1);
  ChainMap cid{-1, {identity_mat(1), identity_mat(2)}};
  CHECK(mats_equal(induced_h0_map(cc, cc, cid, H0Model::kCokernel), identity_mat(1)));

  // A non-commuting square is rejected.
  ChainMap broken{0, {mk(2, 2, {0, 1, 1, 0}), zero_mat(1, 1)}};
  CHECK_THROWS_AS(induced_h0_map(c, c, broken, H0Model::kKernel), DomainError);
}

TEST_CASE("laplacian report on a hand-built pair") {
  // gamma: Q -> Q (identity), delta: Q -> Q (identity) running back.
  ChainComplex g = simple_complex({1, 1}, {identity_mat(1)});
  ChainComplex d = simple_complex({1, 1}, {identity_mat(1)}, -1);
  auto rep = laplacian_report(g, d);
  REQUIRE(rep.count(1));
  CHECK(rep.at(1));

  ChainComplex d0 = simple_complex({1, 1}, {zero_mat(1, 1)}, -1);
  ChainComplex g0 = simple_complex({1, 1}, {zero_mat(1, 1)});
  auto rep0 = laplacian_report(g0, d0);
  CHECK_FALSE(rep0.at(1));
  CHECK_THROWS_AS(laplacian_report(g, simple_complex({1, 2}, {mk(2, 1, {1, 1})}, -1)), DomainError);
}

TEST_CASE("euler characteristic consistency across a family") {
  for (Eigen::Index n = 1; n <= 3; ++n) {
    Mat d = zero_mat(n, n + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      d(i, i) = Rational(1);
      d(i, i + 1) = Rational(-1);
    }
    auto rep = cohomology(simple_complex({n + 1, n}, {d}));
    Eigen::Index euler_terms = (n + 1) - n;
    Eigen::Index euler_cohom = rep.rank_at(0) - rep.rank_at(1);
    CHECK(euler_terms == euler_cohom);
  }
}
