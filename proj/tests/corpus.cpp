#include "corpus.hpp"

namespace hyparr::corpus {

RowVec rv(std::initializer_list<long> v) {
  RowVec r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (long x : v) r(i++) = Rational(x);
  return r;
}

Vec vv(std::initializer_list<long> v) {
  Vec r(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (long x : v) r(i++) = Rational(x);
  return r;
}

Mat mk(Eigen::Index rows, Eigen::Index cols, std::initializer_list<long> vals) {
  Mat m = zero_mat(rows, cols);
  Eigen::Index k = 0;
  for (long v : vals) {
    m(k / cols, k % cols) = Rational(v);
    ++k;
  }
  if (k != rows * cols) throw DomainError("mk: wrong number of entries");
  return m;
}

Arrangement a1() { return make_arrangement(1, {rv({1})}); }
Arrangement a2() { return make_arrangement(2, {rv({1, 0}), rv({0, 1})}); }
Arrangement a3() { return make_arrangement(2, {rv({1, 0}), rv({0, 1}), rv({1, -1})}); }
Arrangement braid3() { return make_arrangement(3, {rv({1, -1, 0}), rv({0, 1, -1}), rv({1, 0, -1})}); }
Arrangement lines4() { return make_arrangement(2, {rv({1, 0}), rv({0, 1}), rv({1, -1}), rv({1, 1})}); }
Arrangement gen5() {
  return make_arrangement(3, {rv({1, 0, 0}), rv({0, 1, 0}), rv({0, 0, 1}), rv({1, 1, 1}), rv({1, -1, 0})});
}
Arrangement gen6() {
  return make_arrangement(2, {rv({1, 0}), rv({0, 1}), rv({1, -1}), rv({1, 1}), rv({1, 2}), rv({2, 1})});
}

HyperbolicSheaf tilted_a1(const FacePoset& poset) {
  HyperbolicSheaf q;
  q.poset = poset;
  int o = poset.face_index("0"), minus = poset.face_index("-"), plus = poset.face_index("+");
  q.dims.assign(static_cast<std::size_t>(poset.size()), 0);
  q.dims[static_cast<std::size_t>(o)] = 2;
  q.dims[static_cast<std::size_t>(minus)] = 1;
  q.dims[static_cast<std::size_t>(plus)] = 1;
  q.gamma[{o, minus}] = mk(1, 2, {1, 0});
  q.gamma[{o, plus}] = mk(1, 2, {0, 1});
  q.delta[{o, minus}] = mk(2, 1, {1, 1});
  q.delta[{o, plus}] = mk(2, 1, {1, 1});
  return q;
}

std::vector<Entry> full_corpus() {
  std::vector<Entry> out;
  auto add = [&](const std::string& name, Arrangement arr) {
    Entry e;
    e.name = name;
    e.arr = std::move(arr);
    e.poset = enumerate_faces(e.arr);
    HyperbolicSheaf c = constant_sheaf(e.poset);
    HyperbolicSheaf s = skyscraper_sheaf(e.poset);
    e.sheaves.emplace_back("constant", c);
    e.sheaves.emplace_back("skyscraper", s);
    e.sheaves.emplace_back("constant+skyscraper", direct_sum(c, s));
    if (name == "A1") {
      HyperbolicSheaf t = tilted_a1(e.poset);
      e.sheaves.emplace_back("tilted", t);
      e.sheaves.emplace_back("tilted*", verdier_dual(t));
    }
    out.push_back(std::move(e));
  };
  add("A1", a1());
  add("A2", a2());
  add("A3", a3());
  add("Braid3", braid3());
  add("Lines4", lines4());
  return out;
}

}  // namespace hyparr::corpus
