#include "hyparr/arrangement.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hyparr {

namespace {

Rational eval(const RowVec& f, const Vec& x) {
  Rational v(0);
  for (Eigen::Index j = 0; j < f.size(); ++j) v += f(j) * x(j);
  return v;
}

/// Primitive integer covector with first nonzero entry positive.
RowVec normalize_covector(RowVec f) {
  mpz_class l(1);
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    mpz_class den = f(j).denominator();
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), l.get_mpz_t(), den.get_mpz_t());
    l = l / g * den;
  }
  Rational scale{mpq_class(l)};
  for (Eigen::Index j = 0; j < f.size(); ++j) f(j) = f(j) * scale;
  mpz_class g(0);
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    mpz_class a = ::abs(f(j).numerator());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), a.get_mpz_t());
  }
  if (g > 1) {
    Rational d{mpq_class(g)};
    for (Eigen::Index j = 0; j < f.size(); ++j) f(j) = f(j) / d;
  }
  for (Eigen::Index j = 0; j < f.size(); ++j) {
    if (f(j).is_zero()) continue;
    if (f(j).sign() < 0)
      for (Eigen::Index k = j; k < f.size(); ++k) f(k) = -f(k);
    break;
  }
  return f;
}

bool proportional(const RowVec& a, const RowVec& b) {
  Mat m(2, a.size());
  m.row(0) = a;
  m.row(1) = b;
  return rank(m) <= 1;
}

}  // namespace

Mat Arrangement::covector_matrix() const {
  Mat m = zero_mat(size(), dim);
  for (Eigen::Index i = 0; i < size(); ++i) m.row(i) = hyperplanes[static_cast<std::size_t>(i)];
  return m;
}

bool Arrangement::essential() const { return rank(covector_matrix()) == dim; }

std::string Arrangement::canonical_string() const {
  std::ostringstream os;
  os << "dim=" << dim << ";";
  for (const auto& h : hyperplanes) {
    for (Eigen::Index j = 0; j < h.size(); ++j) os << h(j).str() << (j + 1 < h.size() ? "," : "");
    os << ";";
  }
  return os.str();
}

std::string Arrangement::hash() const { return fnv1a_hex(canonical_string()); }

Arrangement make_arrangement(Eigen::Index dim, std::vector<RowVec> hyperplanes) {
  for (auto& h : hyperplanes) {
    if (h.size() != dim) throw FormatError("hyperplane covector has wrong length");
    bool zero = true;
    for (Eigen::Index j = 0; j < dim; ++j)
      if (!h(j).is_zero()) zero = false;
    if (zero) throw FormatError("zero covector is not a hyperplane");
  }
  for (std::size_t i = 0; i < hyperplanes.size(); ++i)
    for (std::size_t j = i + 1; j < hyperplanes.size(); ++j)
      if (proportional(hyperplanes[i], hyperplanes[j]))
        throw FormatError("proportional hyperplanes at positions " + std::to_string(i) + " and " + std::to_string(j));
  return Arrangement{dim, std::move(hyperplanes)};
}

char sign_char(int s) { return s < 0 ? '-' : (s > 0 ? '+' : '0'); }

int sign_of_char(char c) {
  switch (c) {
    case '-': return -1;
    case '0': return 0;
    case '+': return 1;
    default: throw FormatError(std::string("bad sign character '") + c + "'");
  }
}

std::string Face::sign_string() const {
  std::string s;
  s.reserve(signs.size());
  for (auto v : signs) s.push_back(sign_char(v));
  return s;
}

bool FacePoset::leq(int a, int b) const {
  const auto& fa = faces[static_cast<std::size_t>(a)].signs;
  const auto& fb = faces[static_cast<std::size_t>(b)].signs;
  for (std::size_t h = 0; h < fa.size(); ++h)
    if (fa[h] != 0 && fa[h] != fb[h]) return false;
  return true;
}

int FacePoset::face_index(const std::string& signs) const {
  auto it = index_.find(signs);
  return it == index_.end() ? -1 : it->second;
}

int FacePoset::minimal_face() const {
  std::string zeros(static_cast<std::size_t>(arr.size()), '0');
  int i = face_index(zeros);
  if (i < 0) throw DomainError("face poset has no minimal face (internal)");
  return i;
}

std::vector<int> FacePoset::faces_of_dim(Eigen::Index d) const {
  std::vector<int> out;
  for (int i = 0; i < size(); ++i)
    if (dim_of(i) == d) out.push_back(i);
  return out;
}

ConeSystem FacePoset::face_system(int i) const {
  const Face& f = faces[static_cast<std::size_t>(i)];
  std::vector<Eigen::Index> zero_rows, strict_rows;
  for (Eigen::Index h = 0; h < arr.size(); ++h)
    (f.signs[static_cast<std::size_t>(h)] == 0 ? zero_rows : strict_rows).push_back(h);
  ConeSystem sys = ConeSystem::empty(arr.dim);
  sys.equalities = zero_mat(static_cast<Eigen::Index>(zero_rows.size()), arr.dim);
  sys.stricts = zero_mat(static_cast<Eigen::Index>(strict_rows.size()), arr.dim);
  for (std::size_t r = 0; r < zero_rows.size(); ++r) sys.equalities.row(static_cast<Eigen::Index>(r)) = arr.hyperplanes[static_cast<std::size_t>(zero_rows[r])];
  for (std::size_t r = 0; r < strict_rows.size(); ++r) {
    int sgn = f.signs[static_cast<std::size_t>(strict_rows[r])];
    sys.stricts.row(static_cast<Eigen::Index>(r)) = arr.hyperplanes[static_cast<std::size_t>(strict_rows[r])] * Rational(sgn);
  }
  return sys;
}

namespace {

struct PartialFace {
  std::vector<std::int8_t> signs;
  Vec witness;
};

/// Moves from w along d, exactly far enough to keep every already-fixed
/// nonzero sign.
Vec safe_step(const Arrangement& arr, const std::vector<std::int8_t>& signs, const Vec& w, const Vec& d, int upto) {
  Rational t(1);
  for (int h = 0; h < upto; ++h) {
    if (signs[static_cast<std::size_t>(h)] == 0) continue;
    Rational fd = eval(arr.hyperplanes[static_cast<std::size_t>(h)], d);
    if (fd.is_zero()) continue;
    Rational bound = abs(eval(arr.hyperplanes[static_cast<std::size_t>(h)], w)) / abs(fd);
    Rational half = bound / Rational(2);
    if (half < t) t = half;
  }
  Vec out = w;
  for (Eigen::Index j = 0; j < w.size(); ++j) out(j) = w(j) + t * d(j);
  return out;
}

ConeSystem prefix_system(const Arrangement& arr, const PartialFace& pf, int upto) {
  std::vector<Eigen::Index> zero_rows, strict_rows;
  for (int h = 0; h < upto; ++h)
    (pf.signs[static_cast<std::size_t>(h)] == 0 ? zero_rows : strict_rows).push_back(h);
  ConeSystem sys = ConeSystem::empty(arr.dim);
  sys.equalities = zero_mat(static_cast<Eigen::Index>(zero_rows.size()), arr.dim);
  sys.stricts = zero_mat(static_cast<Eigen::Index>(strict_rows.size()), arr.dim);
  for (std::size_t r = 0; r < zero_rows.size(); ++r) sys.equalities.row(static_cast<Eigen::Index>(r)) = arr.hyperplanes[static_cast<std::size_t>(zero_rows[r])];
  for (std::size_t r = 0; r < strict_rows.size(); ++r) {
    int sgn = pf.signs[static_cast<std::size_t>(strict_rows[r])];
    sys.stricts.row(static_cast<Eigen::Index>(r)) = arr.hyperplanes[static_cast<std::size_t>(strict_rows[r])] * Rational(sgn);
  }
  return sys;
}

}  // namespace

FacePoset enumerate_faces(const Arrangement& arr) {
  const Eigen::Index n = arr.dim;
  std::vector<PartialFace> work;
  work.push_back(PartialFace{{}, Vec::Constant(n, Rational(0))});
  for (int k = 0; k < arr.size(); ++k) {
    const RowVec& f = arr.hyperplanes[static_cast<std::size_t>(k)];
    std::vector<PartialFace> next;
    for (const auto& pf : work) {
      int s0 = eval(f, pf.witness).sign();
      auto child = [&](int s, const Vec& w) {
        PartialFace c = pf;
        c.signs.push_back(static_cast<std::int8_t>(s));
        c.witness = w;
        next.push_back(std::move(c));
      };
      if (s0 != 0) {
        // Does f reach the opposite open side of this face? If it does, the
        // face meets the wall too (the image of f on an open cone is an
        // open interval).
        ConeSystem opp = prefix_system(arr, pf, k);
        Mat extra = zero_mat(opp.stricts.rows() + 1, n);
        extra.topRows(opp.stricts.rows()) = opp.stricts;
        extra.row(opp.stricts.rows()) = f * Rational(-s0);
        opp.stricts = extra;
        auto wit_opp = feasible_point(opp);
        if (wit_opp) {
          ConeSystem mid = prefix_system(arr, pf, k);
          Mat eqs = zero_mat(mid.equalities.rows() + 1, n);
          eqs.topRows(mid.equalities.rows()) = mid.equalities;
          eqs.row(mid.equalities.rows()) = f;
          mid.equalities = eqs;
          auto wit_mid = feasible_point(mid);
          if (!wit_mid) throw DomainError("face enumeration: wall slice lost between two open sides (internal)");
          child(-s0, *wit_opp);
          child(0, *wit_mid);
        }
        child(s0, pf.witness);
      } else {
        // Witness sits on the new hyperplane. Either f vanishes on the whole
        // face or it takes both signs arbitrarily close to the witness.
        ConeSystem pos = prefix_system(arr, pf, k);
        Mat extra = zero_mat(pos.stricts.rows() + 1, n);
        extra.topRows(pos.stricts.rows()) = pos.stricts;
        extra.row(pos.stricts.rows()) = f;
        pos.stricts = extra;
        auto wit_pos = feasible_point(pos);
        if (!wit_pos) {
          child(0, pf.witness);
        } else {
          ConeSystem neg = prefix_system(arr, pf, k);
          Mat extra2 = zero_mat(neg.stricts.rows() + 1, n);
          extra2.topRows(neg.stricts.rows()) = neg.stricts;
          extra2.row(neg.stricts.rows()) = f * Rational(-1);
          neg.stricts = extra2;
          auto wit_neg = feasible_point(neg);
          if (!wit_neg) throw DomainError("face enumeration: sign of f not symmetric around interior zero (internal)");
          child(-1, *wit_neg);
          child(0, pf.witness);
          child(1, *wit_pos);
        }
      }
    }
    work = std::move(next);
  }

  FacePoset poset;
  poset.arr = arr;
  for (auto& pf : work) {
    Face face;
    face.signs = pf.signs;
    std::vector<Eigen::Index> zero_rows;
    for (int h = 0; h < arr.size(); ++h)
      if (pf.signs[static_cast<std::size_t>(h)] == 0) zero_rows.push_back(h);
    Mat z = zero_mat(static_cast<Eigen::Index>(zero_rows.size()), n);
    for (std::size_t r = 0; r < zero_rows.size(); ++r) z.row(static_cast<Eigen::Index>(r)) = arr.hyperplanes[static_cast<std::size_t>(zero_rows[r])];
    face.span_basis = kernel_basis(z);
    face.dim = face.span_basis.cols();
    face.interior_point = pf.witness;
    for (int h = 0; h < arr.size(); ++h) {
      if (eval(arr.hyperplanes[static_cast<std::size_t>(h)], face.interior_point).sign() != face.signs[static_cast<std::size_t>(h)])
        throw DomainError("face enumeration: witness does not realize its sign vector (internal)");
    }
    if (face.dim == 0) {
      face.second_point = face.interior_point;
    } else {
      bool zero_witness = true;
      for (Eigen::Index j = 0; j < n; ++j)
        if (!face.interior_point(j).is_zero()) zero_witness = false;
      if (zero_witness) {
        face.second_point = face.span_basis.col(0);
      } else if (face.dim == 1) {
        face.second_point = face.interior_point * Rational(2);
      } else {
        Eigen::Index pick = -1;
        for (Eigen::Index c = 0; c < face.span_basis.cols(); ++c) {
          Mat two(n, 2);
          two.col(0) = face.interior_point;
          two.col(1) = face.span_basis.col(c);
          if (rank(two) == 2) { pick = c; break; }
        }
        if (pick < 0) throw DomainError("face enumeration: no independent span direction (internal)");
        face.second_point = safe_step(arr, face.signs, face.interior_point, face.span_basis.col(pick), static_cast<int>(arr.size()));
        for (int h = 0; h < arr.size(); ++h)
          if (eval(arr.hyperplanes[static_cast<std::size_t>(h)], face.second_point).sign() != face.signs[static_cast<std::size_t>(h)])
            throw DomainError("face enumeration: second witness left the face (internal)");
      }
    }
    poset.faces.push_back(std::move(face));
  }

  std::sort(poset.faces.begin(), poset.faces.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.signs < b.signs;
  });
  for (int i = 0; i < poset.size(); ++i) poset.index_[poset.faces[static_cast<std::size_t>(i)].sign_string()] = i;
  poset.upper_.assign(static_cast<std::size_t>(poset.size()), {});
  poset.lower_.assign(static_cast<std::size_t>(poset.size()), {});
  for (int a = 0; a < poset.size(); ++a)
    for (int b = 0; b < poset.size(); ++b) {
      if (a == b || !poset.leq(a, b)) continue;
      if (poset.dim_of(b) == poset.dim_of(a) + 1) {
        poset.covers.emplace_back(a, b);
        poset.upper_[static_cast<std::size_t>(a)].push_back(b);
        poset.lower_[static_cast<std::size_t>(b)].push_back(a);
      }
    }
  for (const auto& [a, b] : poset.covers) {
    const Face& fa = poset.faces[static_cast<std::size_t>(a)];
    const Face& fb = poset.faces[static_cast<std::size_t>(b)];
    Mat m(arr.dim, fa.dim + 1);
    m.leftCols(fa.dim) = fa.span_basis;
    m.col(fa.dim) = fb.interior_point;
    Mat x = solve(fb.span_basis, m);
    int s = det_sign(x);
    if (s == 0) throw DomainError("incidence sign degenerate (internal)");
    poset.incidence[{a, b}] = s;
  }
  return poset;
}

int incidence_sign(const FacePoset& poset, int lower, int upper) {
  auto it = poset.incidence.find({lower, upper});
  if (it == poset.incidence.end()) throw DomainError("incidence_sign: not a covering pair");
  return it->second;
}

std::vector<Flat> intersection_poset(const Arrangement& arr) {
  auto close = [&](const Mat& rows) -> Flat {
    Flat fl;
    fl.basis = kernel_basis(rows);
    fl.dim = fl.basis.cols();
    for (int h = 0; h < arr.size(); ++h) {
      RowVec r = arr.hyperplanes[static_cast<std::size_t>(h)] * fl.basis;
      bool zero = true;
      for (Eigen::Index j = 0; j < r.size(); ++j)
        if (!r(j).is_zero()) zero = false;
      if (zero) fl.zero_set.push_back(h);
    }
    return fl;
  };
  std::vector<Flat> flats;
  std::set<std::vector<int>> seen;
  std::vector<Flat> queue;
  queue.push_back(close(zero_mat(0, arr.dim)));
  while (!queue.empty()) {
    Flat fl = queue.back();
    queue.pop_back();
    if (!seen.insert(fl.zero_set).second) continue;
    flats.push_back(fl);
    for (int h = 0; h < arr.size(); ++h) {
      if (std::binary_search(fl.zero_set.begin(), fl.zero_set.end(), h)) continue;
      std::vector<int> rows = fl.zero_set;
      rows.push_back(h);
      Mat m = zero_mat(static_cast<Eigen::Index>(rows.size()), arr.dim);
      for (std::size_t r = 0; r < rows.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = arr.hyperplanes[static_cast<std::size_t>(rows[r])];
      queue.push_back(close(m));
    }
  }
  std::sort(flats.begin(), flats.end(), [](const Flat& a, const Flat& b) {
    if (a.dim != b.dim) return a.dim > b.dim;
    return a.zero_set < b.zero_set;
  });
  return flats;
}

Flat flat_of_hyperplanes(const Arrangement& arr, const std::vector<int>& hyperplanes) {
  Mat m = zero_mat(static_cast<Eigen::Index>(hyperplanes.size()), arr.dim);
  for (std::size_t r = 0; r < hyperplanes.size(); ++r) {
    int h = hyperplanes[r];
    if (h < 0 || h >= arr.size()) throw DomainError("flat_of_hyperplanes: hyperplane index out of range");
    m.row(static_cast<Eigen::Index>(r)) = arr.hyperplanes[static_cast<std::size_t>(h)];
  }
  Flat fl;
  fl.basis = kernel_basis(m);
  fl.dim = fl.basis.cols();
  for (int h = 0; h < arr.size(); ++h) {
    RowVec r = arr.hyperplanes[static_cast<std::size_t>(h)] * fl.basis;
    bool zero = true;
    for (Eigen::Index j = 0; j < r.size(); ++j)
      if (!r(j).is_zero()) zero = false;
    if (zero) fl.zero_set.push_back(h);
  }
  return fl;
}

bool flat_subset(const Flat& inner, const Flat& outer) {
  for (Eigen::Index c = 0; c < inner.basis.cols(); ++c) {
    Vec v = inner.basis.col(c);
    if (!in_span(outer.basis, v)) return false;
  }
  return true;
}

Arrangement dual_arrangement(const Arrangement& arr) {
  auto flats = intersection_poset(arr);
  std::vector<RowVec> duals;
  for (const auto& fl : flats) {
    if (fl.dim != 1) continue;
    RowVec v(arr.dim);
    for (Eigen::Index j = 0; j < arr.dim; ++j) v(j) = fl.basis(j, 0);
    duals.push_back(normalize_covector(v));
  }
  if (duals.empty()) {
    Eigen::Index lineality = arr.dim - rank(arr.covector_matrix());
    throw DomainError("dual arrangement undefined: no 1-dimensional flats (lineality dimension " + std::to_string(lineality) + ")");
  }
  return make_arrangement(arr.dim, std::move(duals));
}

bool ConeSelection::contains(int id) const {
  return std::binary_search(face_ids.begin(), face_ids.end(), id);
}

const char* cone_tag_name(ConeSelection::Tag tag) {
  switch (tag) {
    case ConeSelection::Tag::kUCone: return "U-cone";
    case ConeSelection::Tag::kVCone: return "V-cone";
    case ConeSelection::Tag::kNuFiber: return "fiber-of-nu";
    case ConeSelection::Tag::kHalfSpace: return "half-space-f>=0";
    case ConeSelection::Tag::kCustom: return "custom";
  }
  return "custom";
}

bool f_nonneg_on_face(const FacePoset& poset, int face, const RowVec& f) {
  // The interior point decides the negative case without a simplex run.
  if (eval(f, poset.faces[static_cast<std::size_t>(face)].interior_point).sign() < 0) return false;
  ConeSystem sys = poset.face_system(face);
  Mat extra = zero_mat(sys.stricts.rows() + 1, poset.arr.dim);
  extra.topRows(sys.stricts.rows()) = sys.stricts;
  extra.row(sys.stricts.rows()) = f * Rational(-1);
  sys.stricts = extra;
  return !feasible_point(sys).has_value();
}

bool f_positive_on_face(const FacePoset& poset, int face, const RowVec& f) {
  if (eval(f, poset.faces[static_cast<std::size_t>(face)].interior_point).sign() <= 0) return false;
  ConeSystem sys = poset.face_system(face);
  Mat ns = zero_mat(sys.nonstricts.rows() + 1, poset.arr.dim);
  ns.topRows(sys.nonstricts.rows()) = sys.nonstricts;
  ns.row(sys.nonstricts.rows()) = f * Rational(-1);
  sys.nonstricts = ns;
  return !feasible_point(sys).has_value();
}

DualGeometry::DualGeometry(const FacePoset& primal, const FacePoset& dual) : primal_(primal), dual_(dual) {
  for (int c = 0; c < dual.size(); ++c)
    if (dual.dim_of(c) == dual.arr.dim) chambers_.push_back(c);
  chamber_u_.assign(chambers_.size(), std::vector<bool>(static_cast<std::size_t>(primal.size()), false));
  parallel_for(chambers_.size(), [&](std::size_t ci) {
    RowVec f = dual.faces[static_cast<std::size_t>(chambers_[ci])].interior_point.transpose();
    for (int b = 0; b < primal.size(); ++b)
      chamber_u_[ci][static_cast<std::size_t>(b)] = f_nonneg_on_face(primal, b, f);
  });
}

ConeSelection DualGeometry::u_cone(int a_dual) const {
  RowVec f = dual_.faces[static_cast<std::size_t>(a_dual)].interior_point.transpose();
  ConeSelection sel;
  sel.tag = ConeSelection::Tag::kUCone;
  for (int b = 0; b < primal_.size(); ++b)
    if (f_nonneg_on_face(primal_, b, f)) sel.face_ids.push_back(b);
  return sel;
}

ConeSelection DualGeometry::v_cone(int a_dual) const {
  ConeSelection sel;
  sel.tag = ConeSelection::Tag::kVCone;
  for (int b = 0; b < primal_.size(); ++b) {
    bool in = true;
    for (std::size_t ci = 0; ci < chambers_.size(); ++ci) {
      if (!dual_.leq(a_dual, chambers_[ci])) continue;
      if (!chamber_u_[ci][static_cast<std::size_t>(b)]) { in = false; break; }
    }
    if (in) sel.face_ids.push_back(b);
  }
  return sel;
}

std::pair<ConeSelection, ConeSelection> dual_cones(const FacePoset& primal, const FacePoset& dual_poset, int a_dual) {
  if (a_dual < 0 || a_dual >= dual_poset.size()) throw DomainError("dual_cones: dual face index out of range");
  DualGeometry geom(primal, dual_poset);
  ConeSelection u = geom.u_cone(a_dual);
  ConeSelection v = geom.v_cone(a_dual);
  for (int id : v.face_ids)
    if (!u.contains(id)) throw DomainError("dual_cones: V not contained in U (internal)");
  return {u, v};
}

bool monotone_cones_check(const FacePoset& primal, const FacePoset& dual_poset) {
  DualGeometry geom(primal, dual_poset);
  std::vector<ConeSelection> us, vs;
  us.reserve(static_cast<std::size_t>(dual_poset.size()));
  for (int a = 0; a < dual_poset.size(); ++a) {
    us.push_back(geom.u_cone(a));
    vs.push_back(geom.v_cone(a));
  }
  for (const auto& [lo, hi] : dual_poset.covers) {
    for (int id : us[static_cast<std::size_t>(hi)].face_ids)
      if (!us[static_cast<std::size_t>(lo)].contains(id)) return false;
    for (int id : vs[static_cast<std::size_t>(lo)].face_ids)
      if (!vs[static_cast<std::size_t>(hi)].contains(id)) return false;
  }
  return true;
}

Vec DerivedArrangements::to_product_coords(const Vec& x) const {
  Mat rhs(x.size(), 1);
  rhs.col(0) = x;
  Mat c = solve(embed_, rhs);
  Vec out(c.rows());
  for (Eigen::Index j = 0; j < c.rows(); ++j) out(j) = c(j, 0);
  return out;
}

DerivedArrangements derived_arrangements(const FacePoset& poset, const Flat& L) {
  const Arrangement& arr = poset.arr;
  const Eigen::Index n = arr.dim;
  const Eigen::Index k = L.dim;
  DerivedArrangements out;
  out.flat = L;

  // Fixed coordinate complement: pivot variables of the flat's defining system.
  Mat z = zero_mat(static_cast<Eigen::Index>(L.zero_set.size()), n);
  for (std::size_t r = 0; r < L.zero_set.size(); ++r) z.row(static_cast<Eigen::Index>(r)) = arr.hyperplanes[static_cast<std::size_t>(L.zero_set[r])];
  auto ech = rref(z);
  out.complement.assign(ech.pivots.begin(), ech.pivots.end());
  if (static_cast<Eigen::Index>(out.complement.size()) != n - k)
    throw DomainError("derived_arrangements: flat basis and complement dimensions disagree (internal)");
  out.embed_ = zero_mat(n, n);
  out.embed_.leftCols(k) = L.basis;
  for (std::size_t c = 0; c < out.complement.size(); ++c) out.embed_(out.complement[c], k + static_cast<Eigen::Index>(c)) = Rational(1);
  if (rank(out.embed_) != n) throw DomainError("derived_arrangements: complement is not a complement (internal)");

  std::vector<int> contains_L, crosses_L;
  for (int h = 0; h < arr.size(); ++h) {
    RowVec r = arr.hyperplanes[static_cast<std::size_t>(h)] * L.basis;
    bool zero = true;
    for (Eigen::Index j = 0; j < r.size(); ++j)
      if (!r(j).is_zero()) zero = false;
    (zero ? contains_L : crosses_L).push_back(h);
  }

  // Induced arrangement on L (restrict and deduplicate).
  std::vector<RowVec> induced_rows;
  for (int h : crosses_L) {
    RowVec r = normalize_covector(arr.hyperplanes[static_cast<std::size_t>(h)] * L.basis);
    bool dup = false;
    for (const auto& prev : induced_rows)
      if (proportional(prev, r)) dup = true;
    if (!dup) induced_rows.push_back(r);
  }
  out.induced = make_arrangement(k, induced_rows);

  // Quotient arrangement on V/L in complement coordinates (kept unnormalized
  // so signs literally match the original hyperplane values).
  std::vector<RowVec> quotient_rows;
  for (int h : contains_L) {
    RowVec r(n - k);
    for (std::size_t c = 0; c < out.complement.size(); ++c) r(static_cast<Eigen::Index>(c)) = arr.hyperplanes[static_cast<std::size_t>(h)](out.complement[c]);
    quotient_rows.push_back(r);
  }
  out.quotient = make_arrangement(n - k, quotient_rows);

  std::vector<RowVec> product_rows;
  for (const auto& r : induced_rows) {
    RowVec row = RowVec::Constant(n, Rational(0));
    row.head(k) = r;
    product_rows.push_back(row);
  }
  for (const auto& r : quotient_rows) {
    RowVec row = RowVec::Constant(n, Rational(0));
    row.tail(n - k) = r;
    product_rows.push_back(row);
  }
  out.product = make_arrangement(n, product_rows);

  out.induced_poset = enumerate_faces(out.induced);
  out.quotient_poset = enumerate_faces(out.quotient);
  out.product_poset = enumerate_faces(out.product);

  // H-sign pattern of each induced face, evaluated back in V.
  const int ni = out.induced_poset.size();
  std::vector<std::vector<int>> tau(static_cast<std::size_t>(ni));
  for (int b = 0; b < ni; ++b) {
    Vec x = L.basis * out.induced_poset.faces[static_cast<std::size_t>(b)].interior_point;
    auto& t = tau[static_cast<std::size_t>(b)];
    t.resize(static_cast<std::size_t>(arr.size()));
    for (int h = 0; h < arr.size(); ++h) t[static_cast<std::size_t>(h)] = eval(arr.hyperplanes[static_cast<std::size_t>(h)], x).sign();
  }

  out.nu.assign(static_cast<std::size_t>(poset.size()), -1);
  out.fibers.assign(static_cast<std::size_t>(out.product_poset.size()), {});
  for (int a = 0; a < poset.size(); ++a) {
    const Face& fa = poset.faces[static_cast<std::size_t>(a)];
    // Second factor: image face in V/L.
    std::string qsigns;
    for (int h : contains_L) qsigns.push_back(sign_char(fa.signs[static_cast<std::size_t>(h)]));
    int qf = out.quotient_poset.face_index(qsigns);
    if (qf < 0) throw DomainError("derived_arrangements: image face missing in quotient (internal)");
    // First factor: the face of the induced arrangement whose closure is cl(A) cap L.
    std::vector<int> compatible;
    for (int b = 0; b < ni; ++b) {
      bool compat = true;
      for (int h = 0; h < arr.size() && compat; ++h) {
        int s = tau[static_cast<std::size_t>(b)][static_cast<std::size_t>(h)];
        int sa = fa.signs[static_cast<std::size_t>(h)];
        if (sa == 0 ? s != 0 : (s != 0 && s != sa)) compat = false;
      }
      if (compat) compatible.push_back(b);
    }
    if (compatible.empty()) throw DomainError("derived_arrangements: closure slice empty (internal)");
    int best = compatible.front();
    for (int b : compatible)
      if (out.induced_poset.dim_of(b) > out.induced_poset.dim_of(best)) best = b;
    for (int b : compatible)
      if (!out.induced_poset.leq(b, best))
        throw DomainError("derived_arrangements: closure slice has no unique top face (internal)");
    std::string psigns = out.induced_poset.faces[static_cast<std::size_t>(best)].sign_string() + qsigns;
    int pf = out.product_poset.face_index(psigns);
    if (pf < 0) throw DomainError("derived_arrangements: specialized face missing in product (internal)");
    if (out.product_poset.dim_of(pf) > fa.dim) throw DomainError("derived_arrangements: specialization raised dimension (internal)");
    out.nu[static_cast<std::size_t>(a)] = pf;
    out.fibers[static_cast<std::size_t>(pf)].push_back(a);
  }
  for (const auto& fib : out.fibers)
    if (fib.empty()) throw DomainError("derived_arrangements: face map not surjective (internal)");
  for (const auto& [a, b] : poset.covers)
    if (!out.product_poset.leq(out.nu[static_cast<std::size_t>(a)], out.nu[static_cast<std::size_t>(b)]))
      throw DomainError("derived_arrangements: face map not monotone (internal)");

  out.nu_parts.assign(static_cast<std::size_t>(out.product_poset.size()), {-1, -1});
  const Eigen::Index mi = out.induced.size();
  for (int p = 0; p < out.product_poset.size(); ++p) {
    std::string s = out.product_poset.faces[static_cast<std::size_t>(p)].sign_string();
    std::string si = s.substr(0, static_cast<std::size_t>(mi));
    std::string sq = s.substr(static_cast<std::size_t>(mi));
    out.nu_parts[static_cast<std::size_t>(p)] = {out.induced_poset.face_index(si), out.quotient_poset.face_index(sq)};
  }
  return out;
}

int relative_sign(const DerivedArrangements& d, const FacePoset& primal, int a, int a_prime) {
  if (!primal.incidence.count({a, a_prime})) throw DomainError("relative_sign: not a covering pair");
  int b = d.nu[static_cast<std::size_t>(a)];
  int b_prime = d.nu[static_cast<std::size_t>(a_prime)];
  if (b == b_prime || !d.product_poset.incidence.count({b, b_prime}))
    throw DomainError("relative_sign: specialized faces are not a covering pair");
  Eigen::Index p = primal.dim_of(a) - d.product_poset.dim_of(b);
  if (primal.dim_of(a_prime) - d.product_poset.dim_of(b_prime) != p)
    throw DomainError("relative_sign: relative dimension bookkeeping violated");
  int koszul = (p % 2 == 0) ? 1 : -1;
  return koszul * incidence_sign(primal, a, a_prime) * incidence_sign(d.product_poset, b, b_prime);
}

std::vector<int> segment_face_walk(const FacePoset& poset, const Vec& x, const Vec& z) {
  const Arrangement& arr = poset.arr;
  std::vector<Rational> cuts{Rational(0), Rational(1)};
  for (Eigen::Index h = 0; h < arr.size(); ++h) {
    Rational a = eval(arr.hyperplanes[static_cast<std::size_t>(h)], x);
    Rational b = eval(arr.hyperplanes[static_cast<std::size_t>(h)], z) - a;
    if (b.is_zero()) continue;
    Rational t = -a / b;
    if (t > Rational(0) && t < Rational(1)) cuts.push_back(t);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  std::vector<int> walk;
  auto visit = [&](const Rational& t) {
    Vec p(x.size());
    for (Eigen::Index j = 0; j < p.size(); ++j) p(j) = x(j) + t * (z(j) - x(j));
    std::string key;
    for (Eigen::Index h = 0; h < arr.size(); ++h) key.push_back(sign_char(eval(arr.hyperplanes[static_cast<std::size_t>(h)], p).sign()));
    int f = poset.face_index(key);
    if (f < 0) throw DomainError("segment_face_walk: point is not on a face (internal)");
    if (walk.empty() || walk.back() != f) walk.push_back(f);
  };
  for (std::size_t i = 0; i < cuts.size(); ++i) {
    visit(cuts[i]);
    if (i + 1 < cuts.size()) visit((cuts[i] + cuts[i + 1]) / Rational(2));
  }
  return walk;
}

bool is_polarization(const Arrangement& arr, const Flat& L, const RowVec& f) {
  RowVec on_l = f * L.basis;
  for (Eigen::Index j = 0; j < on_l.size(); ++j)
    if (!on_l(j).is_zero()) throw DomainError("is_polarization: covector does not vanish on the flat");
  for (const auto& fl : intersection_poset(arr)) {
    RowVec r = f * fl.basis;
    bool inside_ker = true;
    for (Eigen::Index j = 0; j < r.size(); ++j)
      if (!r(j).is_zero()) inside_ker = false;
    if (inside_ker && !flat_subset(fl, L)) return false;
  }
  return true;
}

}  // namespace hyparr
