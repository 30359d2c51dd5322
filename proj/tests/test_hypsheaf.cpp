#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "corpus.hpp"
#include "oracles.hpp"

#include "hyparr/json_io.hpp"

using namespace hyparr;
using corpus::mk;

TEST_CASE("validator passes the example corpus") {
  for (const auto& entry : corpus::full_corpus())
    for (const auto& [name, q] : entry.sheaves) {
      ValidationReport rep = validate(q);
      INFO(entry.name, " / ", name, ": ", rep.first_failure);
      CHECK(rep.ok());
      // duality carries axioms to axioms
      CHECK(validate(verdier_dual(q)).ok());
    }
}

TEST_CASE("gamma surjective and delta injective on comparable pairs") {
  for (const auto& entry : corpus::full_corpus())
    for (const auto& [name, q] : entry.sheaves)
      for (int a = 0; a < entry.poset.size(); ++a)
        for (int b = 0; b < entry.poset.size(); ++b) {
          if (a == b || !entry.poset.leq(a, b)) continue;
          Mat g = q.gamma_path(a, b);
          Mat d = q.delta_path(b, a);
          CHECK(rank(g) == q.dim_of(b));
          CHECK(rank(d) == q.dim_of(b));
        }
}

TEST_CASE("shape mismatches throw instead of reporting") {
  auto poset = enumerate_faces(corpus::a1());
  auto q = constant_sheaf(poset);
  auto missing = q;
  missing.gamma.erase(missing.gamma.begin());
  CHECK_THROWS_AS(validate(missing), DomainError);
  auto wrong = q;
  wrong.gamma.begin()->second = zero_mat(2, 1);
  CHECK_THROWS_AS(validate(wrong), DomainError);
}

TEST_CASE("broken gamma is caught at axiom (i) with the pair named") {
  auto poset = enumerate_faces(corpus::a1());
  auto q = corpus::tilted_a1(poset);
  int o = poset.face_index("0"), plus = poset.face_index("+");
  q.gamma[{o, plus}] = mk(1, 2, {0, 0});
  ValidationReport rep = validate(q);
  CHECK_FALSE(rep.ok());
  CHECK_FALSE(rep.axiom_i);
  REQUIRE(rep.offending.size() == 2);
  CHECK(rep.offending[0] == o);
  CHECK(rep.offending[1] == plus);
}

TEST_CASE("flop values") {
  auto poset = enumerate_faces(corpus::a1());
  auto q = corpus::tilted_a1(poset);
  int o = poset.face_index("0"), plus = poset.face_index("+"), minus = poset.face_index("-");
  CHECK(mats_equal(flop(q, o, o), identity_mat(2)));
  CHECK(mats_equal(flop(q, minus, plus), identity_mat(1)));
  CHECK(mats_equal(flop(q, plus, minus), identity_mat(1)));
  auto c = constant_sheaf(poset);
  for (int a = 0; a < poset.size(); ++a)
    for (int b = 0; b < poset.size(); ++b) CHECK(mats_equal(flop(c, a, b), identity_mat(1)));
}

TEST_CASE("verdier duality") {
  auto poset = enumerate_faces(corpus::a1());
  auto q = corpus::tilted_a1(poset);
  CHECK(sheaves_equal(verdier_dual(verdier_dual(q)), q));
  auto c = constant_sheaf(poset);
  CHECK(sheaves_equal(verdier_dual(c), c));
  auto dq = verdier_dual(q);
  CHECK(validate(dq).ok());
  int o = poset.face_index("0"), plus = poset.face_index("+");
  CHECK(mats_equal(dq.gamma.at({o, plus}), mk(1, 2, {1, 1})));
}

TEST_CASE("direct sums") {
  auto poset = enumerate_faces(corpus::a3());
  auto c = constant_sheaf(poset);
  auto s = skyscraper_sheaf(poset);
  auto d = direct_sum(c, s);
  for (int i = 0; i < poset.size(); ++i) CHECK(d.dim_of(i) == c.dim_of(i) + s.dim_of(i));
  CHECK(validate(d).ok());
  auto other = enumerate_faces(corpus::a2());
  CHECK_THROWS_AS(direct_sum(c, constant_sheaf(other)), DomainError);
}

TEST_CASE("skyscraper sits on the minimal face") {
  auto pb = enumerate_faces(corpus::braid3());
  auto s = skyscraper_sheaf(pb);
  int mf = pb.minimal_face();
  CHECK(pb.dim_of(mf) == 1);  // lineality line
  CHECK(s.dim_of(mf) == 1);
  Eigen::Index total = 0;
  for (auto d : s.dims) total += d;
  CHECK(total == 1);
  CHECK(validate(s).ok());
}

TEST_CASE("sheaf io round trip and structured errors") {
  auto poset = enumerate_faces(corpus::a1());
  auto q = corpus::tilted_a1(poset);
  std::string path = "tilted_roundtrip.json";
  write_sheaf(q, path);
  auto back = read_sheaf(path);
  CHECK(sheaves_equal(q, back));
  std::remove(path.c_str());

  Json j = sheaf_to_json(q);
  Json bad_shape = j;
  bad_shape["gamma"]["0->1"] = Json::array({Json::array({"1"})});  // 1x1 instead of 1x2
  CHECK_THROWS_WITH_AS(sheaf_from_json(bad_shape), doctest::Contains("covering pair"), FormatError);

  Json bad_faces = j;
  bad_faces["faces"] = Json::array({"0", "-", "++"});
  try {
    sheaf_from_json(bad_faces);
    FAIL("expected a FormatError");
  } catch (const FormatError& e) {
    std::string msg = e.what();
    CHECK(msg.find("missing") != std::string::npos);
    CHECK(msg.find("+") != std::string::npos);
  }

  // Structure loads even when the axioms fail; the validator is separate.
  Json broken_axiom = j;
  broken_axiom["gamma"]["0->2"] = Json::array({Json::array({"0", "0"})});
  auto loaded = sheaf_from_json(broken_axiom);
  CHECK_FALSE(validate(loaded).ok());

  // plain integers are accepted wherever rationals go
  Json ints = j;
  ints["gamma"]["0->1"] = Json::array({Json::array({1, 0})});
  CHECK(sheaves_equal(sheaf_from_json(ints), q));

  // a permuted face list describes the same sheaf
  Json permuted;
  permuted["arrangement"] = j["arrangement"];
  permuted["faces"] = Json::array({"+", "0", "-"});
  permuted["dims"] = Json::array({1, 2, 1});
  permuted["gamma"] = Json{{"1->2", j["gamma"]["0->1"]}, {"1->0", j["gamma"]["0->2"]}};
  permuted["delta"] = Json{{"2->1", j["delta"]["1->0"]}, {"0->1", j["delta"]["2->0"]}};
  CHECK(sheaves_equal(sheaf_from_json(permuted), q));

  // structure maps on non-covering pairs are rejected
  Json noncover = j;
  noncover["gamma"]["1->2"] = Json::array({Json::array({"1"})});
  CHECK_THROWS_AS(sheaf_from_json(noncover), FormatError);
}

TEST_CASE("segment and collinearity predicates") {
  auto p1 = enumerate_faces(corpus::a1());
  int o = p1.face_index("0"), plus = p1.face_index("+"), minus = p1.face_index("-");
  CHECK(collinear_triple(p1, minus, o, plus));
  CHECK(collinear_triple(p1, o, plus, plus));
  CHECK_FALSE(collinear_triple(p1, minus, plus, o));

  auto p2 = enumerate_faces(corpus::a2());
  CHECK(collinear_triple(p2, p2.face_index("++"), p2.face_index("00"), p2.face_index("--")));
  CHECK(collinear_triple(p2, p2.face_index("++"), p2.face_index("+0"), p2.face_index("+-")));
  // rays to rays across the open quadrant between them
  CHECK(collinear_triple(p2, p2.face_index("+0"), p2.face_index("++"), p2.face_index("0+")));
  // but nothing from the closed positive quadrant reaches the opposite one
  CHECK_FALSE(collinear_triple(p2, p2.face_index("+0"), p2.face_index("--"), p2.face_index("0+")));
}

TEST_CASE("flop is functorial along face walks") {
  // Property: along any segment between face witnesses, the flop from the
  // first face to the last equals the composite of the step flops.
  auto run = [](const FacePoset& poset, const HyperbolicSheaf& q) {
    for (int a = 0; a < poset.size(); ++a)
      for (int c = 0; c < poset.size(); ++c) {
        auto walk = oracles::segment_face_walk(poset, poset.faces[static_cast<std::size_t>(a)].interior_point,
                                               poset.faces[static_cast<std::size_t>(c)].interior_point);
        if (walk.size() < 3) continue;
        Mat composite = identity_mat(q.dim_of(walk.front()));
        for (std::size_t i = 0; i + 1 < walk.size(); ++i) composite = flop(q, walk[i], walk[i + 1]) * composite;
        CHECK(mats_equal(composite, flop(q, walk.front(), walk.back())));
      }
  };
  auto p1 = enumerate_faces(corpus::a1());
  run(p1, corpus::tilted_a1(p1));
  auto p3 = enumerate_faces(corpus::a3());
  run(p3, direct_sum(constant_sheaf(p3), skyscraper_sheaf(p3)));
}
