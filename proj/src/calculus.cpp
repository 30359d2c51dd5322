#include "hyparr/calculus.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace hyparr {

namespace {

std::string fname(const FacePoset& p, int i) { return p.faces[static_cast<std::size_t>(i)].sign_string(); }

Mat inverse(const Mat& m) {
  if (m.rows() != m.cols()) throw TransportError("inverse: matrix not square");
  Mat inv = solve(m, identity_mat(m.rows()));
  if (!mats_equal(Mat(m * inv), identity_mat(m.rows()))) throw TransportError("inverse: matrix is singular");
  return inv;
}

/// Trivialization sign of or_{V/B}: determinant of the face's span basis
/// completed by its coordinate complement.
int or_vb_sign(const FacePoset& p, int face) {
  const Face& f = p.faces[static_cast<std::size_t>(face)];
  const Eigen::Index n = p.arr.dim;
  std::vector<Eigen::Index> zero_rows;
  for (Eigen::Index h = 0; h < p.arr.size(); ++h)
    if (f.signs[static_cast<std::size_t>(h)] == 0) zero_rows.push_back(h);
  Mat z = zero_mat(static_cast<Eigen::Index>(zero_rows.size()), n);
  for (std::size_t r = 0; r < zero_rows.size(); ++r) z.row(static_cast<Eigen::Index>(r)) = p.arr.hyperplanes[static_cast<std::size_t>(zero_rows[r])];
  auto piv = rref(z).pivots;
  Mat full = zero_mat(n, n);
  full.leftCols(f.dim) = f.span_basis;
  for (std::size_t c = 0; c < piv.size(); ++c) full(piv[c], f.dim + static_cast<Eigen::Index>(c)) = Rational(1);
  int s = det_sign(full);
  if (s == 0) throw DomainError("or_{V/B} trivialization degenerate (internal)");
  return s;
}

using Twist = std::vector<int>;  // per-face sign, empty means all +1

int twist_of(const Twist& tw, int face) { return tw.empty() ? 1 : tw[static_cast<std::size_t>(face)]; }

/// Selection complex over `faces` of the poset. Gamma variant: summand of
/// face B at degree dim(B) - offset, blocks gamma_{BC} eps(B,C). Delta
/// variant: summand at offset - dim(B), blocks delta_{CB} with the same
/// incidence signs running the other way. A zero-dimensional anchor keeps
/// degree 0 present so H^0 models are always defined.
ComplexBuilder::Built build_selection(const HyperbolicSheaf& q, const std::vector<int>& faces, Variant variant,
                                      Eigen::Index offset, const Twist& tw, bool anchor0 = true) {
  ComplexBuilder bb;
  std::map<int, ComplexBuilder::Handle> handle;
  bool have0 = false;
  for (int b : faces) {
    int deg = variant == Variant::kGamma ? static_cast<int>(q.poset.dim_of(b) - offset)
                                         : static_cast<int>(offset - q.poset.dim_of(b));
    if (deg == 0) have0 = true;
    handle[b] = bb.add_summand(deg, fname(q.poset, b), q.dim_of(b));
  }
  if (anchor0 && !have0) bb.add_summand(0, "@anchor", 0);
  std::set<int> sel(faces.begin(), faces.end());
  for (int b : faces)
    for (int c : q.poset.upper_covers(b)) {
      if (!sel.count(c)) continue;
      int sgn = incidence_sign(q.poset, b, c) * twist_of(tw, b) * twist_of(tw, c);
      if (variant == Variant::kGamma) {
        Mat m = q.gamma.at({b, c}) * Rational(sgn);
        bb.add_block(handle[b], handle[c], m);
      } else {
        Mat m = q.delta.at({b, c}) * Rational(sgn);
        bb.add_block(handle[c], handle[b], m);
      }
    }
  return bb.build();
}

std::vector<int> all_faces(const FacePoset& p) {
  std::vector<int> out(static_cast<std::size_t>(p.size()));
  for (int i = 0; i < p.size(); ++i) out[static_cast<std::size_t>(i)] = i;
  return out;
}

}  // namespace

ChainComplex rgamma_compact_complex(const HyperbolicSheaf& q) {
  return build_selection(q, all_faces(q.poset), Variant::kGamma, 0, {}, false).cx;
}

CohomologyReport rgamma_compact(const HyperbolicSheaf& q) {
  require_valid(q, "rgamma_compact");
  return cohomology(rgamma_compact_complex(q));
}

ChainComplex rgamma_full_complex(const HyperbolicSheaf& q) {
  return build_selection(q, all_faces(q.poset), Variant::kDelta, 0, {}, false).cx;
}

CohomologyReport rgamma_full(const HyperbolicSheaf& q) {
  require_valid(q, "rgamma_full");
  return cohomology(rgamma_full_complex(q));
}

ChainComplex ordinary_stalk_complex(const HyperbolicSheaf& q, int face) {
  std::vector<int> above;
  for (int b = 0; b < q.poset.size(); ++b)
    if (q.poset.leq(face, b)) above.push_back(b);
  return build_selection(q, above, Variant::kDelta, q.poset.arr.dim, {}, false).cx;
}

CohomologyReport ordinary_stalk(const HyperbolicSheaf& q, int face) {
  require_valid(q, "ordinary_stalk");
  if (face < 0 || face >= q.poset.size()) throw DomainError("ordinary_stalk: face index out of range");
  return cohomology(ordinary_stalk_complex(q, face));
}

bool hyperbolic_from_stalks_check(const HyperbolicSheaf& q, int face) {
  require_valid(q, "hyperbolic_from_stalks_check");
  const FacePoset& p = q.poset;
  // Summand (B, C) for B >= face, C >= B, placed at total degree
  // dim(B) - dim(C); vertical differentials are the stalk deltas, horizontal
  // ones the stalk projections with a Koszul sign on the C-parity.
  ComplexBuilder bb;
  std::map<std::pair<int, int>, ComplexBuilder::Handle> handle;
  for (int b = 0; b < p.size(); ++b) {
    if (!p.leq(face, b)) continue;
    for (int c = 0; c < p.size(); ++c) {
      if (!p.leq(b, c)) continue;
      int deg = static_cast<int>(p.dim_of(b) - p.dim_of(c));
      handle[{b, c}] = bb.add_summand(deg, fname(p, b) + "|" + fname(p, c), q.dim_of(c));
    }
  }
  for (const auto& [bc, h] : handle) {
    auto [b, c] = bc;
    // vertical: delta along c' <_1 c, same b
    for (int cp : p.lower_covers(c)) {
      if (!p.leq(b, cp)) continue;
      Mat m = q.delta.at({cp, c}) * Rational(incidence_sign(p, cp, c));
      bb.add_block(h, handle.at({b, cp}), m);
    }
    // horizontal: projection to b' >_1 b when the stalk of b' still holds c
    for (int bp : p.upper_covers(b)) {
      if (!p.leq(bp, c)) continue;
      int koszul = (p.dim_of(c) % 2 == 0) ? 1 : -1;
      Mat m = identity_mat(q.dim_of(c)) * Rational(koszul * incidence_sign(p, b, bp));
      bb.add_block(h, handle.at({bp, c}), m);
    }
  }
  CohomologyReport rep = cohomology(bb.build().cx);
  return rep.concentrated_in(0) && rep.rank_at(0) == q.dim_of(face);
}

VanishingCycles vanishing_cycles(const HyperbolicSheaf& q, const RowVec& f, int face) {
  require_valid(q, "vanishing_cycles");
  const FacePoset& p = q.poset;
  if (face < 0 || face >= p.size()) throw DomainError("vanishing_cycles: face index out of range");
  if (f.size() != p.arr.dim) throw DomainError("vanishing_cycles: covector has wrong length");
  const Face& fa = p.faces[static_cast<std::size_t>(face)];
  RowVec on_span = f * fa.span_basis;
  for (Eigen::Index j = 0; j < on_span.size(); ++j)
    if (!on_span(j).is_zero())
      throw DomainError("vanishing_cycles: face is not contained in ker f (not maximal in ker f)");
  std::vector<int> zset;
  for (Eigen::Index h = 0; h < p.arr.size(); ++h)
    if (fa.signs[static_cast<std::size_t>(h)] == 0) zset.push_back(static_cast<int>(h));
  Flat L = flat_of_hyperplanes(p.arr, zset);
  if (!is_polarization(p.arr, L, f)) throw DomainError("vanishing_cycles: covector is not a polarization at the face's flat");

  std::vector<int> sel{face};
  for (int b = 0; b < p.size(); ++b) {
    if (b == face || !p.leq(face, b)) continue;
    if (f_nonneg_on_face(p, b, f)) sel.push_back(b);
  }
  VanishingCycles out;
  ConeSelection cs;
  cs.tag = ConeSelection::Tag::kHalfSpace;
  cs.face_ids = sel;
  std::sort(cs.face_ids.begin(), cs.face_ids.end());

  out.gamma_cx = SelectionComplex{cs, Grading::kRelative, Variant::kGamma,
                                  build_selection(q, sel, Variant::kGamma, fa.dim, {})};
  out.delta_cx = SelectionComplex{cs, Grading::kRelative, Variant::kDelta,
                                  build_selection(q, sel, Variant::kDelta, fa.dim, {})};
  CohomologyReport gr = cohomology(out.gamma_cx.complex());
  CohomologyReport dr = cohomology(out.delta_cx.complex());
  if (!gr.acyclic_above(0) || !gr.acyclic_below(0))
    throw AcyclicityError("vanishing_cycles: gamma complex not exact outside the leftmost term at face " + fname(p, face));
  if (!dr.acyclic_below(0) || !dr.acyclic_above(0))
    throw AcyclicityError("vanishing_cycles: delta complex not exact outside the rightmost term at face " + fname(p, face));
  if (gr.rank_at(0) != dr.rank_at(0))
    throw AcyclicityError("vanishing_cycles: gamma and delta answers disagree at face " + fname(p, face));
  out.dim = gr.rank_at(0);
  out.laplacian = laplacian_report(out.gamma_cx.complex(), out.delta_cx.complex());
  return out;
}

namespace {

struct H0Models {
  ComplexBuilder::Built gcx, dcx;
  Mat kernel, coker, transport, transport_inv;
  Eigen::Index dim = 0;
};

H0Models h0_models(const HyperbolicSheaf& q, const std::vector<int>& faces, Eigen::Index offset, const Twist& tw,
                   const std::string& who, const std::string& where) {
  H0Models m;
  m.gcx = build_selection(q, faces, Variant::kGamma, offset, tw);
  m.dcx = build_selection(q, faces, Variant::kDelta, offset, tw);
  CohomologyReport gr = cohomology(m.gcx.cx);
  CohomologyReport dr = cohomology(m.dcx.cx);
  if (!gr.acyclic_above(0) || !gr.acyclic_below(0))
    throw AcyclicityError(who + ": gamma complex not exact away from degree 0 at " + where);
  if (!dr.acyclic_above(0) || !dr.acyclic_below(0))
    throw AcyclicityError(who + ": delta complex not exact away from degree 0 at " + where);
  if (!gr.h0_kernel_basis || !dr.h0_cokernel_projection)
    throw DomainError(who + ": degree-0 models unavailable (internal)");
  m.kernel = *gr.h0_kernel_basis;
  m.coker = *dr.h0_cokernel_projection;
  if (m.kernel.cols() != m.coker.rows())
    throw AcyclicityError(who + ": gamma and delta answers disagree at " + where);
  m.transport = m.coker * m.kernel;
  if (m.transport.rows() != m.transport.cols() || rank(m.transport) != m.transport.rows())
    throw TransportError(who + ": kernel -> cokernel transport is singular at " + where);
  m.transport_inv = inverse(m.transport);
  m.dim = m.kernel.cols();
  return m;
}

}  // namespace

SpecializeResult specialize(const HyperbolicSheaf& q, const Flat& L) {
  require_valid(q, "specialize");
  DerivedArrangements der = derived_arrangements(q.poset, L);
  const FacePoset& P = der.product_poset;
  const int np = P.size();

  std::vector<H0Models> models;
  models.reserve(static_cast<std::size_t>(np));
  for (int b = 0; b < np; ++b)
    models.push_back(h0_models(q, der.fibers[static_cast<std::size_t>(b)], P.dim_of(b), {}, "specialize", "fiber of " + fname(P, b)));

  HyperbolicSheaf out;
  out.poset = P;
  out.dims.resize(static_cast<std::size_t>(np));
  for (int b = 0; b < np; ++b) out.dims[static_cast<std::size_t>(b)] = models[static_cast<std::size_t>(b)].dim;

  for (const auto& [b, b2] : P.covers) {
    const H0Models& mb = models[static_cast<std::size_t>(b)];
    const H0Models& mb2 = models[static_cast<std::size_t>(b2)];
    ChainMapBuilder fwd(mb.gcx, mb2.gcx);
    ChainMapBuilder bwd(mb2.dcx, mb.dcx);
    for (int a : der.fibers[static_cast<std::size_t>(b)]) {
      for (int a2 : q.poset.upper_covers(a)) {
        if (der.nu[static_cast<std::size_t>(a2)] != b2) continue;
        int sgn = relative_sign(der, q.poset, a, a2);
        int deg = static_cast<int>(q.poset.dim_of(a) - P.dim_of(b));
        fwd.add_block(deg, fname(q.poset, a), fname(q.poset, a2), Mat(q.gamma.at({a, a2}) * Rational(sgn)));
        bwd.add_block(-deg, fname(q.poset, a2), fname(q.poset, a), Mat(q.delta.at({a, a2}) * Rational(sgn)));
      }
    }
    Mat x = induced_h0_map(mb.gcx.cx, mb2.gcx.cx, fwd.build(), H0Model::kKernel);
    Mat y = induced_h0_map(mb2.dcx.cx, mb.dcx.cx, bwd.build(), H0Model::kCokernel);
    Mat transported = mb.transport_inv * y * mb2.transport;
    Mat defect = x * transported;  // E^nu_{b2} -> E^nu_{b2}, must be invertible
    Mat fix;
    try {
      fix = inverse(defect);
    } catch (const TransportError&) {
      throw TransportError("specialize: axiom (i) normalization singular on cover " + fname(P, b) + " < " + fname(P, b2));
    }
    out.gamma[{b, b2}] = x;
    out.delta[{b, b2}] = transported * fix;
  }
  require_valid(out, "specialize output");
  return SpecializeResult{std::move(out), std::move(der)};
}

namespace {

/// Locate the flat of `arr` spanned by the given integer-space basis image.
Flat flat_of_subspace(const Arrangement& arr, const Mat& basis) {
  std::vector<int> zset;
  for (int h = 0; h < arr.size(); ++h) {
    RowVec r = arr.hyperplanes[static_cast<std::size_t>(h)] * basis;
    bool zero = true;
    for (Eigen::Index j = 0; j < r.size(); ++j)
      if (!r(j).is_zero()) zero = false;
    if (zero) zset.push_back(h);
  }
  Flat fl = flat_of_hyperplanes(arr, zset);
  if (fl.dim != rank(basis)) throw DomainError("bispec: intermediate subspace is not a flat of the product arrangement");
  return fl;
}

std::map<std::vector<int>, Eigen::Index> dims_by_fiber(const std::vector<int>& composite, const std::vector<Eigen::Index>& dims) {
  std::map<std::vector<int>, Eigen::Index> out;
  std::map<int, std::vector<int>> groups;
  for (int a = 0; a < static_cast<int>(composite.size()); ++a) groups[composite[static_cast<std::size_t>(a)]].push_back(a);
  for (auto& [target, members] : groups) out[members] = dims[static_cast<std::size_t>(target)];
  return out;
}

}  // namespace

bool bispec_consistency(const HyperbolicSheaf& q, const Flat& N, const Flat& M) {
  require_valid(q, "bispec_consistency");
  if (!flat_subset(N, M)) throw DomainError("bispec_consistency: N is not contained in M");

  // Route A: specialize along N, then along T_N M = N x (M/N).
  SpecializeResult sN = specialize(q, N);
  Mat imageA(sN.geometry.product.dim, M.dim);
  for (Eigen::Index c = 0; c < M.dim; ++c) imageA.col(c) = sN.geometry.to_product_coords(Vec(M.basis.col(c)));
  Flat flatA = flat_of_subspace(sN.geometry.product, imageA);
  SpecializeResult routeA = specialize(sN.sheaf, flatA);

  // Route B: specialize along M, then along N embedded in the zero section.
  SpecializeResult sM = specialize(q, M);
  Mat imageB(sM.geometry.product.dim, N.dim);
  for (Eigen::Index c = 0; c < N.dim; ++c) imageB.col(c) = sM.geometry.to_product_coords(Vec(N.basis.col(c)));
  Flat flatB = flat_of_subspace(sM.geometry.product, imageB);
  SpecializeResult routeB = specialize(sM.sheaf, flatB);

  // Composite face maps down to the two final posets.
  std::vector<int> compA(static_cast<std::size_t>(q.poset.size()));
  std::vector<int> compB(static_cast<std::size_t>(q.poset.size()));
  for (int a = 0; a < q.poset.size(); ++a) {
    compA[static_cast<std::size_t>(a)] = routeA.geometry.nu[static_cast<std::size_t>(sN.geometry.nu[static_cast<std::size_t>(a)])];
    compB[static_cast<std::size_t>(a)] = routeB.geometry.nu[static_cast<std::size_t>(sM.geometry.nu[static_cast<std::size_t>(a)])];
  }
  auto dimsA = dims_by_fiber(compA, routeA.sheaf.dims);
  auto dimsB = dims_by_fiber(compB, routeB.sheaf.dims);
  if (dimsA != dimsB) return false;

  // One-shot: hyperbolic stalks of the composite fibers computed directly
  // from q, graded relative to the target face dimension.
  std::map<std::vector<int>, Eigen::Index> dims1;
  {
    std::map<int, std::vector<int>> groups;
    for (int a = 0; a < q.poset.size(); ++a) groups[compB[static_cast<std::size_t>(a)]].push_back(a);
    for (auto& [target, members] : groups) {
      Eigen::Index offset = routeB.geometry.product_poset.dim_of(target);
      auto built = build_selection(q, members, Variant::kGamma, offset, {});
      CohomologyReport rep = cohomology(built.cx);
      dims1[members] = rep.rank_at(0);
      if (!rep.concentrated_in(0)) return false;
    }
  }
  return dimsA == dims1;
}

namespace {

struct FourierContext {
  Arrangement dual;
  FacePoset dual_poset;
  Twist twist;
  std::vector<std::vector<int>> v_cones;  // per dual face
  std::vector<std::vector<int>> u_cones;  // per dual face

  FourierContext(const HyperbolicSheaf& q) {
    const FacePoset& p = q.poset;
    if (!p.arr.essential())
      throw DomainError("fourier: arrangement is not essential, dual cones are not unions of faces");
    dual = dual_arrangement(p.arr);
    dual_poset = enumerate_faces(dual);
    twist.resize(static_cast<std::size_t>(p.size()));
    for (int b = 0; b < p.size(); ++b) twist[static_cast<std::size_t>(b)] = or_vb_sign(p, b);
    DualGeometry geom(p, dual_poset);
    v_cones.resize(static_cast<std::size_t>(dual_poset.size()));
    u_cones.resize(static_cast<std::size_t>(dual_poset.size()));
    parallel_for(static_cast<std::size_t>(dual_poset.size()), [&](std::size_t a) {
      v_cones[a] = geom.v_cone(static_cast<int>(a)).face_ids;
      u_cones[a] = geom.u_cone(static_cast<int>(a)).face_ids;
    });
  }
};

}  // namespace

FourierResult fourier(const HyperbolicSheaf& q) {
  require_valid(q, "fourier");
  FourierContext ctx(q);
  const FacePoset& dp = ctx.dual_poset;
  const int nd = dp.size();

  std::vector<H0Models> models;
  models.reserve(static_cast<std::size_t>(nd));
  for (int a = 0; a < nd; ++a)
    models.push_back(h0_models(q, ctx.v_cones[static_cast<std::size_t>(a)], 0, ctx.twist, "fourier", "dual face " + fname(dp, a)));

  HyperbolicSheaf out;
  out.poset = dp;
  out.dims.resize(static_cast<std::size_t>(nd));
  for (int a = 0; a < nd; ++a) out.dims[static_cast<std::size_t>(a)] = models[static_cast<std::size_t>(a)].dim;

  int dual_origin = dp.minimal_face();
  int primal_origin = q.poset.minimal_face();
  if (out.dims[static_cast<std::size_t>(dual_origin)] != q.dim_of(primal_origin))
    throw DomainError("fourier: stalk at the zero dual face does not match the stalk at the origin (internal)");

  for (const auto& [a1, a2] : dp.covers) {
    const H0Models& m1 = models[static_cast<std::size_t>(a1)];
    const H0Models& m2 = models[static_cast<std::size_t>(a2)];
    // delta: quotient projection of the bigger small-cone complex.
    ChainMapBuilder proj(m2.gcx, m1.gcx);
    for (int b : ctx.v_cones[static_cast<std::size_t>(a1)])
      proj.add_block(static_cast<int>(q.poset.dim_of(b)), fname(q.poset, b), fname(q.poset, b), identity_mat(q.dim_of(b)));
    Mat dlt = induced_h0_map(m2.gcx.cx, m1.gcx.cx, proj.build(), H0Model::kKernel);
    // gamma: dagger subcomplex inclusion, transported onto the kernel model.
    ChainMapBuilder incl(m1.dcx, m2.dcx);
    for (int b : ctx.v_cones[static_cast<std::size_t>(a1)])
      incl.add_block(-static_cast<int>(q.poset.dim_of(b)), fname(q.poset, b), fname(q.poset, b), identity_mat(q.dim_of(b)));
    Mat y = induced_h0_map(m1.dcx.cx, m2.dcx.cx, incl.build(), H0Model::kCokernel);
    Mat transported = m2.transport_inv * y * m1.transport;
    Mat defect = transported * dlt;  // E^v_{a2} -> E^v_{a2}
    Mat fix;
    try {
      fix = inverse(defect);
    } catch (const TransportError&) {
      throw TransportError("fourier: axiom (i) normalization singular on dual cover " + fname(dp, a1) + " < " + fname(dp, a2));
    }
    out.gamma[{a1, a2}] = fix * transported;
    out.delta[{a1, a2}] = dlt;
  }
  require_valid(out, "fourier output");
  return FourierResult{std::move(out), std::move(ctx.dual)};
}

namespace {

bool fourier_cross_check_impl(const HyperbolicSheaf& q, const FourierContext& ctx, int a_dual) {
  const FacePoset& p = q.poset;
  const FacePoset& dp = ctx.dual_poset;
  // Expected rank: kernel of the small-cone gamma complex.
  auto vb = build_selection(q, ctx.v_cones[static_cast<std::size_t>(a_dual)], Variant::kGamma, 0, ctx.twist);
  CohomologyReport vrep = cohomology(vb.cx);
  Eigen::Index expected = vrep.rank_at(0);

  // Double complex over pairs (dual face above a_dual, face in its big cone).
  ComplexBuilder bb;
  std::map<std::pair<int, int>, ComplexBuilder::Handle> handle;
  for (int c = 0; c < dp.size(); ++c) {
    if (!dp.leq(a_dual, c)) continue;
    for (int b : ctx.u_cones[static_cast<std::size_t>(c)]) {
      int deg = -static_cast<int>(dp.dim_of(c)) - static_cast<int>(p.dim_of(b));
      handle[{c, b}] = bb.add_summand(deg, fname(dp, c) + "|" + fname(p, b), q.dim_of(b));
    }
  }
  for (const auto& [cb, h] : handle) {
    auto [c, b] = cb;
    // vertical: delta on the primal side inside U(c)
    for (int bl : p.lower_covers(b)) {
      // big cones are closed, so bl stays inside
      int sgn = incidence_sign(p, bl, b) * ctx.twist[static_cast<std::size_t>(bl)] * ctx.twist[static_cast<std::size_t>(b)];
      Mat m = q.delta.at({bl, b}) * Rational(sgn);
      bb.add_block(h, handle.at({c, bl}), m);
    }
    // horizontal: embedding to lower dual faces with a Koszul sign
    for (int cl : dp.lower_covers(c)) {
      if (!dp.leq(a_dual, cl)) continue;
      int koszul = (p.dim_of(b) % 2 == 0) ? 1 : -1;
      Mat m = identity_mat(q.dim_of(b)) * Rational(koszul * incidence_sign(dp, cl, c));
      bb.add_block(h, handle.at({cl, b}), m);
    }
  }
  CohomologyReport rep = cohomology(bb.build().cx);
  if (rep.total_rank() != expected) return false;
  int nonzero_degrees = 0;
  for (const auto& [d, r] : rep.ranks)
    if (r > 0) ++nonzero_degrees;
  return nonzero_degrees <= 1;
}

}  // namespace

bool fourier_cross_check(const HyperbolicSheaf& q, int a_dual) {
  require_valid(q, "fourier_cross_check");
  FourierContext ctx(q);
  if (a_dual < 0 || a_dual >= ctx.dual_poset.size()) throw DomainError("fourier_cross_check: dual face index out of range");
  return fourier_cross_check_impl(q, ctx, a_dual);
}

bool fourier_cross_check_all(const HyperbolicSheaf& q) {
  require_valid(q, "fourier_cross_check");
  FourierContext ctx(q);
  for (int a = 0; a < ctx.dual_poset.size(); ++a)
    if (!fourier_cross_check_impl(q, ctx, a)) return false;
  return true;
}

bool inclusion_exclusion_check(const Arrangement& arr) {
  FacePoset p = enumerate_faces(arr);
  Arrangement dual = dual_arrangement(arr);
  FacePoset dp = enumerate_faces(dual);
  DualGeometry geom(p, dp);
  const int nd = dp.size();
  std::vector<std::vector<bool>> in_u(static_cast<std::size_t>(nd), std::vector<bool>(static_cast<std::size_t>(p.size()), false));
  std::vector<std::vector<bool>> in_v(static_cast<std::size_t>(nd), std::vector<bool>(static_cast<std::size_t>(p.size()), false));
  for (int a = 0; a < nd; ++a) {
    for (int b : geom.u_cone(a).face_ids) in_u[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
    for (int b : geom.v_cone(a).face_ids) in_v[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = true;
  }
  for (int a = 0; a < nd; ++a)
    for (int b = 0; b < p.size(); ++b) {
      long long rhs_u = 0, rhs_v = 0;
      for (int c = 0; c < nd; ++c) {
        if (!dp.leq(a, c)) continue;
        // Codimension-signed summands; the compactly supported Euler
        // characteristic of a full quotient space is (-1)^dim, so the sign
        // must be taken from the top.
        long long sgn = ((arr.dim - dp.dim_of(c)) % 2 == 0) ? 1 : -1;
        if (in_v[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)]) rhs_u += sgn;
        if (in_u[static_cast<std::size_t>(c)][static_cast<std::size_t>(b)]) rhs_v += sgn;
      }
      long long lhs_u = in_u[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] ? 1 : 0;
      long long lhs_v = in_v[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] ? 1 : 0;
      if (lhs_u != rhs_u || lhs_v != rhs_v) return false;
    }
  return true;
}

MicroResult microlocalize_experimental(const HyperbolicSheaf& q, const Flat& L) {
  MicroResult result;
  std::optional<SpecializeResult> sp_opt;
  try {
    sp_opt = specialize(q, L);
  } catch (const DomainError& e) {
    result.issues.push_back(std::string("specialize failed: ") + e.what());
    result.ok = false;
    return result;
  }
  SpecializeResult& sp = *sp_opt;
  const FacePoset& P = sp.geometry.product_poset;
  const HyperbolicSheaf& s = sp.sheaf;

  if (sp.geometry.quotient.dim == 0) {
    // Relative transform over a zero bundle: nothing to do.
    result.sheaf = s;
    result.ok = true;
    return result;
  }

  const FacePoset& qp = sp.geometry.quotient_poset;
  Arrangement dual_q = dual_arrangement(sp.geometry.quotient);
  FacePoset dqp = enumerate_faces(dual_q);
  DualGeometry geom(qp, dqp);
  Twist twist(static_cast<std::size_t>(qp.size()));
  for (int b = 0; b < qp.size(); ++b) twist[static_cast<std::size_t>(b)] = or_vb_sign(qp, b);
  std::vector<std::vector<int>> v_cones(static_cast<std::size_t>(dqp.size()));
  for (int a = 0; a < dqp.size(); ++a) v_cones[static_cast<std::size_t>(a)] = geom.v_cone(a).face_ids;

  const FacePoset& ip = sp.geometry.induced_poset;
  const Eigen::Index mi = sp.geometry.induced.size();

  // Output arrangement: induced x dual(quotient).
  std::vector<RowVec> rows;
  for (const auto& r : sp.geometry.induced.hyperplanes) {
    RowVec row = RowVec::Constant(sp.geometry.induced.dim + dual_q.dim, Rational(0));
    row.head(sp.geometry.induced.dim) = r;
    rows.push_back(row);
  }
  for (const auto& r : dual_q.hyperplanes) {
    RowVec row = RowVec::Constant(sp.geometry.induced.dim + dual_q.dim, Rational(0));
    row.tail(dual_q.dim) = r;
    rows.push_back(row);
  }
  Arrangement marr = make_arrangement(sp.geometry.induced.dim + dual_q.dim, rows);
  FacePoset mp = enumerate_faces(marr);

  auto product_face = [&](int a1, int b2) {
    std::string sig = ip.faces[static_cast<std::size_t>(a1)].sign_string() + qp.faces[static_cast<std::size_t>(b2)].sign_string();
    int idx = P.face_index(sig);
    if (idx < 0) throw DomainError("microlocalize: missing product face (internal)");
    return idx;
  };
  auto split_m = [&](int m) {
    std::string sig = mp.faces[static_cast<std::size_t>(m)].sign_string();
    int a1 = ip.face_index(sig.substr(0, static_cast<std::size_t>(mi)));
    int a2 = dqp.face_index(sig.substr(static_cast<std::size_t>(mi)));
    if (a1 < 0 || a2 < 0) throw DomainError("microlocalize: output face does not split (internal)");
    return std::pair<int, int>{a1, a2};
  };

  // Slice complexes: for a fixed induced face a1 and dual quotient face a2,
  // the small-cone complex in the second factor with E^nu entries.
  auto build_slice = [&](int a1, int a2, Variant variant) {
    ComplexBuilder bb;
    std::map<int, ComplexBuilder::Handle> handle;
    bool have0 = false;
    for (int b2 : v_cones[static_cast<std::size_t>(a2)]) {
      int pf = product_face(a1, b2);
      int deg = static_cast<int>(qp.dim_of(b2));
      if (variant == Variant::kDelta) deg = -deg;
      if (deg == 0) have0 = true;
      handle[b2] = bb.add_summand(deg, fname(qp, b2), s.dim_of(pf));
    }
    if (!have0) bb.add_summand(0, "@anchor", 0);
    std::set<int> sel(v_cones[static_cast<std::size_t>(a2)].begin(), v_cones[static_cast<std::size_t>(a2)].end());
    for (int b2 : v_cones[static_cast<std::size_t>(a2)])
      for (int c2 : qp.upper_covers(b2)) {
        if (!sel.count(c2)) continue;
        int sgn = incidence_sign(qp, b2, c2) * twist[static_cast<std::size_t>(b2)] * twist[static_cast<std::size_t>(c2)];
        std::pair<int, int> pr{product_face(a1, b2), product_face(a1, c2)};
        if (variant == Variant::kGamma)
          bb.add_block(handle[b2], handle[c2], Mat(s.gamma.at(pr) * Rational(sgn)));
        else
          bb.add_block(handle[c2], handle[b2], Mat(s.delta.at(pr) * Rational(sgn)));
      }
    return bb.build();
  };

  const int nm = mp.size();
  std::vector<ComplexBuilder::Built> gcx(static_cast<std::size_t>(nm)), dcx(static_cast<std::size_t>(nm));
  std::vector<Mat> kernels(static_cast<std::size_t>(nm)), cokers(static_cast<std::size_t>(nm));
  std::vector<Mat> transports(static_cast<std::size_t>(nm)), transports_inv(static_cast<std::size_t>(nm));
  HyperbolicSheaf out;
  out.poset = mp;
  out.dims.resize(static_cast<std::size_t>(nm));
  for (int m = 0; m < nm; ++m) {
    auto [a1, a2] = split_m(m);
    gcx[static_cast<std::size_t>(m)] = build_slice(a1, a2, Variant::kGamma);
    dcx[static_cast<std::size_t>(m)] = build_slice(a1, a2, Variant::kDelta);
    CohomologyReport gr = cohomology(gcx[static_cast<std::size_t>(m)].cx);
    CohomologyReport dr = cohomology(dcx[static_cast<std::size_t>(m)].cx);
    if (!gr.concentrated_in(0) || !dr.concentrated_in(0) || gr.rank_at(0) != dr.rank_at(0)) {
      result.issues.push_back("slice complex at " + fname(mp, m) + " not concentrated in degree 0");
      result.ok = false;
      return result;
    }
    kernels[static_cast<std::size_t>(m)] = *gr.h0_kernel_basis;
    cokers[static_cast<std::size_t>(m)] = *dr.h0_cokernel_projection;
    Mat t = cokers[static_cast<std::size_t>(m)] * kernels[static_cast<std::size_t>(m)];
    if (t.rows() != t.cols() || rank(t) != t.rows()) {
      result.issues.push_back("transport singular at " + fname(mp, m));
      result.ok = false;
      return result;
    }
    transports[static_cast<std::size_t>(m)] = t;
    transports_inv[static_cast<std::size_t>(m)] = inverse(t);
    out.dims[static_cast<std::size_t>(m)] = gr.rank_at(0);
  }

  try {
    for (const auto& [m1, m2] : mp.covers) {
      auto [a1, d1] = split_m(m1);
      auto [b1, d2] = split_m(m2);
      if (a1 == b1) {
        // second-factor cover d1 <_1 d2 in the dual quotient poset
        ChainMapBuilder proj(gcx[static_cast<std::size_t>(m2)], gcx[static_cast<std::size_t>(m1)]);
        for (int b2 : v_cones[static_cast<std::size_t>(d1)]) {
          int pf = product_face(a1, b2);
          proj.add_block(static_cast<int>(qp.dim_of(b2)), fname(qp, b2), fname(qp, b2), identity_mat(s.dim_of(pf)));
        }
        Mat dlt = induced_h0_map(gcx[static_cast<std::size_t>(m2)].cx, gcx[static_cast<std::size_t>(m1)].cx, proj.build(), H0Model::kKernel);
        ChainMapBuilder incl(dcx[static_cast<std::size_t>(m1)], dcx[static_cast<std::size_t>(m2)]);
        for (int b2 : v_cones[static_cast<std::size_t>(d1)]) {
          int pf = product_face(a1, b2);
          incl.add_block(-static_cast<int>(qp.dim_of(b2)), fname(qp, b2), fname(qp, b2), identity_mat(s.dim_of(pf)));
        }
        Mat y = induced_h0_map(dcx[static_cast<std::size_t>(m1)].cx, dcx[static_cast<std::size_t>(m2)].cx, incl.build(), H0Model::kCokernel);
        Mat transported = transports_inv[static_cast<std::size_t>(m2)] * y * transports[static_cast<std::size_t>(m1)];
        Mat fix = inverse(transported * dlt);
        out.gamma[{m1, m2}] = fix * transported;
        out.delta[{m1, m2}] = dlt;
      } else {
        // first-factor cover a1 <_1 b1, same dual quotient face d1 == d2
        ChainMapBuilder fwd(gcx[static_cast<std::size_t>(m1)], gcx[static_cast<std::size_t>(m2)]);
        ChainMapBuilder bwd(gcx[static_cast<std::size_t>(m2)], gcx[static_cast<std::size_t>(m1)]);
        for (int b2 : v_cones[static_cast<std::size_t>(d1)]) {
          std::pair<int, int> pr{product_face(a1, b2), product_face(b1, b2)};
          int deg = static_cast<int>(qp.dim_of(b2));
          fwd.add_block(deg, fname(qp, b2), fname(qp, b2), s.gamma.at(pr));
          bwd.add_block(deg, fname(qp, b2), fname(qp, b2), s.delta.at(pr));
        }
        out.gamma[{m1, m2}] = induced_h0_map(gcx[static_cast<std::size_t>(m1)].cx, gcx[static_cast<std::size_t>(m2)].cx, fwd.build(), H0Model::kKernel);
        out.delta[{m1, m2}] = induced_h0_map(gcx[static_cast<std::size_t>(m2)].cx, gcx[static_cast<std::size_t>(m1)].cx, bwd.build(), H0Model::kKernel);
      }
    }
  } catch (const DomainError& e) {
    result.issues.push_back(std::string("structure maps: ") + e.what());
    result.ok = false;
    return result;
  }

  ValidationReport vr = validate(out);
  result.sheaf = out;
  result.ok = vr.ok();
  if (!vr.ok()) result.issues.push_back("output fails validation: " + vr.first_failure);
  return result;
}

}  // namespace hyparr
