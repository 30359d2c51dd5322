#include "hyparr/hypsheaf.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hyparr {

namespace {

std::string face_name(const FacePoset& p, int i) { return p.faces[static_cast<std::size_t>(i)].sign_string(); }

Rational eval_cov(const RowVec& f, const Vec& x) {
  Rational v(0);
  for (Eigen::Index j = 0; j < f.size(); ++j) v += f(j) * x(j);
  return v;
}

}  // namespace

Mat HyperbolicSheaf::gamma_path(int a, int b) const {
  if (a == b) return identity_mat(dim_of(a));
  for (int c : poset.lower_covers(b)) {
    if (!poset.leq(a, c)) continue;
    return gamma.at({c, b}) * gamma_path(a, c);
  }
  throw DomainError("gamma_path: faces are not comparable");
}

Mat HyperbolicSheaf::delta_path(int b, int a) const {
  if (a == b) return identity_mat(dim_of(a));
  for (int c : poset.lower_covers(b)) {
    if (!poset.leq(a, c)) continue;
    return delta_path(c, a) * delta.at({c, b});
  }
  throw DomainError("delta_path: faces are not comparable");
}

bool segment_meets_face(const FacePoset& poset, const Vec& x, const Vec& z, int face) {
  // Feasibility in the segment parameter t of { sign(f_h(x + t(z-x))) =
  // signs[h] for all h, 0 <= t <= 1 }; one-dimensional exact interval
  // arithmetic.
  Rational lo(0), hi(1);
  bool lo_open = false, hi_open = false;
  const Face& f = poset.faces[static_cast<std::size_t>(face)];
  for (Eigen::Index h = 0; h < poset.arr.size(); ++h) {
    const RowVec& cov = poset.arr.hyperplanes[static_cast<std::size_t>(h)];
    Rational a = eval_cov(cov, x);
    Rational b = eval_cov(cov, z) - a;  // value = a + t b
    int want = f.signs[static_cast<std::size_t>(h)];
    if (want == 0) {
      if (b.is_zero()) {
        if (!a.is_zero()) return false;
        continue;
      }
      Rational t0 = -a / b;
      if (t0 < lo || (t0 == lo && lo_open)) return false;
      if (t0 > hi || (t0 == hi && hi_open)) return false;
      lo = hi = t0;
      lo_open = hi_open = false;
    } else {
      Rational sa = a * Rational(want);
      Rational sb = b * Rational(want);
      // need sa + t sb > 0
      if (sb.is_zero()) {
        if (!(sa > Rational(0))) return false;
        continue;
      }
      Rational t0 = -sa / sb;
      if (sb > Rational(0)) {
        if (t0 > lo || (t0 == lo && !lo_open)) { lo = t0; lo_open = true; }
      } else {
        if (t0 < hi || (t0 == hi && !hi_open)) { hi = t0; hi_open = true; }
      }
    }
  }
  if (lo < hi) return true;
  if (lo == hi && !lo_open && !hi_open) return true;
  return false;
}

bool collinear_triple(const FacePoset& poset, int a, int b, int c) {
  const Face& fa = poset.faces[static_cast<std::size_t>(a)];
  const Face& fc = poset.faces[static_cast<std::size_t>(c)];
  const Vec* xs[2] = {&fa.interior_point, &fa.second_point};
  const Vec* zs[2] = {&fc.interior_point, &fc.second_point};
  for (const Vec* x : xs)
    for (const Vec* z : zs)
      if (segment_meets_face(poset, *x, *z, b)) return true;
  return false;
}

namespace {

struct Failure {
  std::string what;
  std::vector<int> faces;
};

}  // namespace

ValidationReport validate(const HyperbolicSheaf& q) {
  ValidationReport rep;
  const FacePoset& p = q.poset;
  const int n = p.size();
  auto fail = [&](bool& flag, const std::string& what, std::vector<int> faces) {
    flag = false;
    if (rep.first_failure.empty()) {
      std::ostringstream os;
      os << what << " [";
      for (std::size_t i = 0; i < faces.size(); ++i) os << (i ? " " : "") << face_name(p, faces[i]);
      os << "]";
      rep.first_failure = os.str();
      rep.offending = std::move(faces);
    }
  };

  // Shape problems are malformed data, not axiom content, and throw.
  if (q.dims.size() != static_cast<std::size_t>(n)) throw DomainError("validate: dims list does not match the face poset");
  for (const auto& [a, b] : p.covers) {
    auto git = q.gamma.find({a, b});
    auto dit = q.delta.find({a, b});
    if (git == q.gamma.end() || dit == q.delta.end())
      throw DomainError("validate: missing structure matrix on covering pair " + face_name(p, a) + " < " + face_name(p, b));
    if (git->second.rows() != q.dim_of(b) || git->second.cols() != q.dim_of(a))
      throw DomainError("validate: gamma matrix shape mismatch on " + face_name(p, a) + " < " + face_name(p, b));
    if (dit->second.rows() != q.dim_of(a) || dit->second.cols() != q.dim_of(b))
      throw DomainError("validate: delta matrix shape mismatch on " + face_name(p, a) + " < " + face_name(p, b));
  }
  if (q.gamma.size() != p.covers.size() || q.delta.size() != p.covers.size())
    throw DomainError("validate: structure matrices on non-covering pairs");

  // Composite maps for every comparable pair, by dynamic programming in
  // dimension order (faces are sorted by dimension). Agreement over every
  // admissible penultimate face is exactly chain functoriality.
  std::map<std::pair<int, int>, Mat> gpath, dpath;  // keyed (lower, upper)
  for (int b = 0; b < n; ++b) {
    gpath[{b, b}] = identity_mat(q.dim_of(b));
    dpath[{b, b}] = identity_mat(q.dim_of(b));
    for (int a = 0; a < n; ++a) {
      if (a == b || !p.leq(a, b)) continue;
      Mat gref, dref;
      bool first = true;
      for (int c : p.lower_covers(b)) {
        if (!p.leq(a, c)) continue;
        Mat g = q.gamma.at({c, b}) * gpath.at({a, c});
        Mat d = dpath.at({a, c}) * q.delta.at({c, b});
        if (first) {
          gref = std::move(g);
          dref = std::move(d);
          first = false;
          continue;
        }
        if (rep.gamma_functorial && !mats_equal(gref, g)) fail(rep.gamma_functorial, "gamma composites disagree", {a, c, b});
        if (rep.delta_functorial && !mats_equal(dref, d)) fail(rep.delta_functorial, "delta composites disagree", {a, c, b});
      }
      if (first) throw DomainError("validate: comparable pair with no covering chain (poset defect)");
      gpath[{a, b}] = std::move(gref);
      dpath[{a, b}] = std::move(dref);
    }
  }
  if (!rep.gamma_functorial || !rep.delta_functorial) return rep;

  // Axiom (i): gamma_{ba} delta_{ab} = id_{E_a} for b <= a.
  for (int b = 0; b < n; ++b)
    for (int a = 0; a < n; ++a) {
      if (!p.leq(b, a)) continue;
      Mat comp = gpath.at({b, a}) * dpath.at({b, a});
      if (!mats_equal(comp, identity_mat(q.dim_of(a)))) {
        fail(rep.axiom_i, "axiom (i): gamma.delta is not the identity", {b, a});
        break;
      }
    }
  if (!rep.axiom_i) return rep;

  // Flop through the minimal face, plus independence of the lower bound.
  const int mf = p.minimal_face();
  std::vector<Mat> to_min(static_cast<std::size_t>(n)), from_min(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    to_min[static_cast<std::size_t>(a)] = dpath.at({mf, a});
    from_min[static_cast<std::size_t>(a)] = gpath.at({mf, a});
  }
  auto phi = [&](int a, int b) { return Mat(from_min[static_cast<std::size_t>(b)] * to_min[static_cast<std::size_t>(a)]); };

  for (int a = 0; a < n && rep.flop_independent; ++a)
    for (int b = 0; b < n && rep.flop_independent; ++b) {
      Mat ref = phi(a, b);
      for (int c = 0; c < n; ++c) {
        if (c == mf || !p.leq(c, a) || !p.leq(c, b)) continue;
        Mat alt = gpath.at({c, b}) * dpath.at({c, a});
        if (!mats_equal(ref, alt)) {
          fail(rep.flop_independent, "flop depends on the lower bound", {a, b, c});
          break;
        }
      }
    }
  if (!rep.flop_independent) return rep;

  // Axiom (ii). The faces collinear between a and c are exactly the faces
  // crossed by the witness segments, so one walk per segment enumerates all
  // admissible middles. Parallelized over the first face.
  {
    std::vector<Failure> found(static_cast<std::size_t>(n));
    std::vector<char> bad(static_cast<std::size_t>(n), 0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t ai) {
      int a = static_cast<int>(ai);
      const Face& fa = p.faces[ai];
      for (int c = 0; c < n && !bad[ai]; ++c) {
        const Face& fc = p.faces[static_cast<std::size_t>(c)];
        std::set<int> middles;
        for (const Vec* x : {&fa.interior_point, &fa.second_point})
          for (const Vec* z : {&fc.interior_point, &fc.second_point}) {
            auto walk = segment_face_walk(p, *x, *z);
            middles.insert(walk.begin(), walk.end());
          }
        Mat lhs = phi(a, c);
        for (int b : middles) {
          Mat rhs = phi(b, c) * phi(a, b);
          if (!mats_equal(lhs, rhs)) {
            bad[ai] = 1;
            found[ai] = Failure{"axiom (ii): flop transitivity fails on collinear triple", {a, b, c}};
            break;
          }
        }
      }
    });
    for (int a = 0; a < n; ++a)
      if (bad[static_cast<std::size_t>(a)]) {
        fail(rep.axiom_ii, found[static_cast<std::size_t>(a)].what, found[static_cast<std::size_t>(a)].faces);
        return rep;
      }
  }

  // Axiom (iii): flop invertible between neighbors on opposite sides of a
  // wall. A codimension-one common face C separates A and B exactly when
  // some segment from A to B passes through C.
  for (int a = 0; a < n && rep.axiom_iii; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b || p.dim_of(a) != p.dim_of(b)) continue;
      int wall = -1;
      for (int c = 0; c < n; ++c) {
        if (p.dim_of(c) + 1 != p.dim_of(a)) continue;
        if (!p.leq(c, a) || !p.leq(c, b)) continue;
        if (!collinear_triple(p, a, c, b)) continue;
        if (wall >= 0 && wall != c) {
          fail(rep.axiom_iii, "two distinct walls between neighbors (poset defect)", {a, b});
          break;
        }
        wall = c;
      }
      if (!rep.axiom_iii) break;
      if (wall < 0) continue;
      Mat f = phi(a, b);
      if (f.rows() != f.cols() || rank(f) != f.rows()) {
        fail(rep.axiom_iii, "axiom (iii): flop across a wall is not invertible", {a, b, wall});
        break;
      }
    }
  return rep;
}

void require_valid(const HyperbolicSheaf& q, const std::string& who) {
  ValidationReport rep = validate(q);
  if (!rep.ok()) throw DomainError(who + ": invalid hyperbolic sheaf: " + rep.first_failure);
}

Mat flop(const HyperbolicSheaf& q, int a, int b) {
  int c = q.poset.minimal_face();
  return q.gamma_path(c, b) * q.delta_path(a, c);
}

HyperbolicSheaf verdier_dual(const HyperbolicSheaf& q) {
  HyperbolicSheaf d;
  d.poset = q.poset;
  d.dims = q.dims;
  for (const auto& [pair, m] : q.delta) d.gamma[pair] = m.transpose();
  for (const auto& [pair, m] : q.gamma) d.delta[pair] = m.transpose();
  return d;
}

HyperbolicSheaf constant_sheaf(const FacePoset& poset) {
  HyperbolicSheaf q;
  q.poset = poset;
  q.dims.assign(static_cast<std::size_t>(poset.size()), 1);
  for (const auto& pr : poset.covers) {
    q.gamma[pr] = identity_mat(1);
    q.delta[pr] = identity_mat(1);
  }
  return q;
}

HyperbolicSheaf skyscraper_sheaf(const FacePoset& poset) {
  HyperbolicSheaf q;
  q.poset = poset;
  q.dims.assign(static_cast<std::size_t>(poset.size()), 0);
  q.dims[static_cast<std::size_t>(poset.minimal_face())] = 1;
  for (const auto& [a, b] : poset.covers) {
    q.gamma[{a, b}] = zero_mat(q.dim_of(b), q.dim_of(a));
    q.delta[{a, b}] = zero_mat(q.dim_of(a), q.dim_of(b));
  }
  return q;
}

HyperbolicSheaf direct_sum(const HyperbolicSheaf& a, const HyperbolicSheaf& b) {
  if (a.poset.arr.canonical_string() != b.poset.arr.canonical_string())
    throw DomainError("direct_sum: summands live on different arrangements");
  HyperbolicSheaf q;
  q.poset = a.poset;
  q.dims.resize(a.dims.size());
  for (std::size_t i = 0; i < a.dims.size(); ++i) q.dims[i] = a.dims[i] + b.dims[i];
  auto block = [](const Mat& x, const Mat& y) {
    Mat m = zero_mat(x.rows() + y.rows(), x.cols() + y.cols());
    m.block(0, 0, x.rows(), x.cols()) = x;
    m.block(x.rows(), x.cols(), y.rows(), y.cols()) = y;
    return m;
  };
  for (const auto& pr : a.poset.covers) {
    q.gamma[pr] = block(a.gamma.at(pr), b.gamma.at(pr));
    q.delta[pr] = block(a.delta.at(pr), b.delta.at(pr));
  }
  return q;
}

bool sheaves_equal(const HyperbolicSheaf& a, const HyperbolicSheaf& b) {
  if (a.poset.arr.canonical_string() != b.poset.arr.canonical_string()) return false;
  if (a.dims != b.dims) return false;
  for (const auto& pr : a.poset.covers) {
    if (!mats_equal(a.gamma.at(pr), b.gamma.at(pr))) return false;
    if (!mats_equal(a.delta.at(pr), b.delta.at(pr))) return false;
  }
  return true;
}

}  // namespace hyparr
