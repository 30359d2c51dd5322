#include "hyparr/chain_complex.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

namespace hyparr {

namespace {
std::atomic<std::uint64_t> g_checked_ok{0};
std::atomic<std::uint64_t> g_checked_failed{0};
}  // namespace

std::uint64_t complexes_checked_ok() { return g_checked_ok.load(); }
std::uint64_t complexes_checked_failed() { return g_checked_failed.load(); }
void reset_complex_counters() {
  g_checked_ok = 0;
  g_checked_failed = 0;
}

Eigen::Index ChainComplex::term_dim(int idx) const {
  Eigen::Index d = 0;
  for (const auto& s : terms[static_cast<std::size_t>(idx)]) d += s.dim;
  return d;
}

Mat ChainComplex::diff_from_degree(int d) const {
  int idx = d - lowest_degree;
  if (idx >= 0 && idx + 1 < num_terms()) return diffs[static_cast<std::size_t>(idx)];
  return zero_mat(dim_at_degree(d + 1), dim_at_degree(d));
}

bool complex_check(const ChainComplex& c) {
  bool ok = true;
  if (c.diffs.size() + 1 != std::max<std::size_t>(c.terms.size(), 1)) ok = c.terms.empty() && c.diffs.empty();
  if (ok) {
    for (int i = 0; ok && i + 1 < c.num_terms(); ++i) {
      const Mat& d = c.diffs[static_cast<std::size_t>(i)];
      if (d.rows() != c.term_dim(i + 1) || d.cols() != c.term_dim(i)) ok = false;
    }
    for (int i = 0; ok && i + 2 < c.num_terms(); ++i) {
      Mat prod = c.diffs[static_cast<std::size_t>(i + 1)] * c.diffs[static_cast<std::size_t>(i)];
      if (!is_zero_mat(prod)) ok = false;
    }
  }
  if (ok)
    ++g_checked_ok;
  else
    ++g_checked_failed;
  return ok;
}

Eigen::Index CohomologyReport::total_rank() const {
  Eigen::Index t = 0;
  for (const auto& [d, r] : ranks) t += r;
  return t;
}

bool CohomologyReport::concentrated_in(int d) const { return total_rank() == rank_at(d); }

bool CohomologyReport::acyclic_above(int d) const {
  for (const auto& [deg, r] : ranks)
    if (deg > d && r > 0) return false;
  return true;
}

bool CohomologyReport::acyclic_below(int d) const {
  for (const auto& [deg, r] : ranks)
    if (deg < d && r > 0) return false;
  return true;
}

CohomologyReport cohomology(const ChainComplex& c) {
  if (!complex_check(c)) throw DomainError("cohomology: input fails complex_check (d^2 != 0 or bad shapes)");
  CohomologyReport rep;
  const int n = c.num_terms();
  std::vector<Eigen::Index> dranks(static_cast<std::size_t>(std::max(n - 1, 0)), 0);
  for (int i = 0; i + 1 < n; ++i) dranks[static_cast<std::size_t>(i)] = rank(c.diffs[static_cast<std::size_t>(i)]);
  Eigen::Index euler_terms = 0, euler_cohom = 0;
  for (int i = 0; i < n; ++i) {
    Eigen::Index dim = c.term_dim(i);
    Eigen::Index out = (i + 1 < n) ? dranks[static_cast<std::size_t>(i)] : 0;
    Eigen::Index in = (i > 0) ? dranks[static_cast<std::size_t>(i - 1)] : 0;
    Eigen::Index h = dim - out - in;
    int deg = c.lowest_degree + i;
    if (h != 0) rep.ranks[deg] = h;
    int s = (deg % 2 == 0) ? 1 : -1;
    euler_terms += s * dim;
    euler_cohom += s * h;
  }
  if (euler_terms != euler_cohom) throw DomainError("cohomology: Euler characteristic mismatch (internal)");
  if (c.has_degree(0)) {
    int idx = -c.lowest_degree;
    Mat incoming = (idx > 0) ? c.diffs[static_cast<std::size_t>(idx - 1)] : zero_mat(c.term_dim(idx), 0);
    Mat outgoing = (idx + 1 < n) ? c.diffs[static_cast<std::size_t>(idx)] : zero_mat(0, c.term_dim(idx));
    if (is_zero_mat(incoming)) rep.h0_kernel_basis = kernel_basis(outgoing);
    if (is_zero_mat(outgoing)) rep.h0_cokernel_projection = cokernel_projection(incoming);
  }
  return rep;
}

namespace {

Mat block_at_degree(const ChainMap& f, int d, const ChainComplex& src, const ChainComplex& dst) {
  int idx = d - f.lowest_degree;
  if (idx >= 0 && idx < static_cast<int>(f.blocks.size())) return f.blocks[static_cast<std::size_t>(idx)];
  return zero_mat(dst.dim_at_degree(d), src.dim_at_degree(d));
}

}  // namespace

Mat induced_h0_map(const ChainComplex& src, const ChainComplex& dst, const ChainMap& f, H0Model model) {
  int lo = std::min(src.lowest_degree, dst.lowest_degree);
  int hi = std::max(src.highest_degree(), dst.highest_degree());
  for (int d = lo; d <= hi; ++d) {
    Mat fd = block_at_degree(f, d, src, dst);
    if (fd.rows() != dst.dim_at_degree(d) || fd.cols() != src.dim_at_degree(d))
      throw DomainError("induced_h0_map: chain map block shape mismatch at degree " + std::to_string(d));
    if (d == hi) continue;
    Mat fd1 = block_at_degree(f, d + 1, src, dst);
    Mat lhs = dst.diff_from_degree(d) * fd;
    Mat rhs = fd1 * src.diff_from_degree(d);
    if (!mats_equal(lhs, rhs)) throw DomainError("induced_h0_map: non-commuting chain map at degree " + std::to_string(d));
  }
  CohomologyReport rs = cohomology(src);
  CohomologyReport rd = cohomology(dst);
  Mat f0 = block_at_degree(f, 0, src, dst);
  if (model == H0Model::kKernel) {
    if (!rs.h0_kernel_basis || !rd.h0_kernel_basis)
      throw DomainError("induced_h0_map: kernel model unavailable (incoming differential present)");
    return solve(*rd.h0_kernel_basis, Mat(f0 * (*rs.h0_kernel_basis)));
  }
  if (!rs.h0_cokernel_projection || !rd.h0_cokernel_projection)
    throw DomainError("induced_h0_map: cokernel model unavailable (outgoing differential present)");
  const Mat& ps = *rs.h0_cokernel_projection;
  const Mat& pd = *rd.h0_cokernel_projection;
  // Y ps = pd f0; solve the transposed system.
  Mat yt = solve(Mat(ps.transpose()), Mat((pd * f0).transpose()));
  return yt.transpose();
}

std::map<int, bool> laplacian_report(const ChainComplex& gamma_cx, const ChainComplex& delta_cx) {
  if (gamma_cx.lowest_degree != 0) throw DomainError("laplacian_report: gamma complex must start at degree 0");
  int k = gamma_cx.highest_degree();
  if (delta_cx.lowest_degree != -k || delta_cx.highest_degree() != 0)
    throw DomainError("laplacian_report: delta complex degree range must mirror the gamma complex");
  for (int p = 0; p <= k; ++p)
    if (gamma_cx.dim_at_degree(p) != delta_cx.dim_at_degree(-p))
      throw DomainError("laplacian_report: term dimension mismatch at degree " + std::to_string(p));
  std::map<int, bool> out;
  for (int p = 1; p <= k; ++p) {
    Eigen::Index dim = gamma_cx.dim_at_degree(p);
    // G_p : term p -> p+1, D_p : term p -> p-1 (the delta differential -p -> -p+1).
    Mat gp = gamma_cx.diff_from_degree(p);
    Mat gpm1 = gamma_cx.diff_from_degree(p - 1);
    Mat dp = delta_cx.diff_from_degree(-p);
    Mat dp1 = delta_cx.diff_from_degree(-(p + 1));
    Mat lap = zero_mat(dim, dim);
    if (gp.rows() > 0 && dp1.cols() == gp.rows()) lap = lap + dp1 * gp;
    if (dp.rows() > 0 && gpm1.cols() == dp.rows()) lap = lap + gpm1 * dp;
    out[p] = (dim == 0) || (rank(lap) == dim);
  }
  return out;
}

ComplexBuilder::Handle ComplexBuilder::add_summand(int degree, const std::string& label, Eigen::Index dim) {
  auto& list = summands_[degree];
  list.push_back(Summand{label, dim});
  return Handle{degree, static_cast<int>(list.size()) - 1};
}

void ComplexBuilder::add_block(const Handle& from, const Handle& to, const Mat& block) {
  if (to.degree != from.degree + 1) throw DomainError("ComplexBuilder: block must raise degree by one");
  blocks_.push_back(Block{from, to, block});
}

Eigen::Index ComplexBuilder::Built::offset_of(int degree, const std::string& label) const {
  auto it = layout.find({degree, label});
  if (it == layout.end()) throw DomainError("complex layout: no summand '" + label + "' at degree " + std::to_string(degree));
  return it->second.first;
}

Eigen::Index ComplexBuilder::Built::dim_of(int degree, const std::string& label) const {
  auto it = layout.find({degree, label});
  if (it == layout.end()) throw DomainError("complex layout: no summand '" + label + "' at degree " + std::to_string(degree));
  return it->second.second;
}

bool ComplexBuilder::Built::has(int degree, const std::string& label) const {
  return layout.count({degree, label}) > 0;
}

ComplexBuilder::Built ComplexBuilder::build() const {
  Built out;
  if (summands_.empty()) {
    if (!blocks_.empty()) throw DomainError("ComplexBuilder: blocks without summands");
    complex_check(out.cx);
    return out;
  }
  int lo = summands_.begin()->first;
  int hi = summands_.rbegin()->first;
  out.cx.lowest_degree = lo;
  out.cx.terms.assign(static_cast<std::size_t>(hi - lo + 1), {});
  for (const auto& [deg, list] : summands_) {
    Eigen::Index off = 0;
    for (const auto& s : list) {
      out.cx.terms[static_cast<std::size_t>(deg - lo)].push_back(s);
      out.layout[{deg, s.label}] = {off, s.dim};
      off += s.dim;
    }
  }
  for (int i = 0; i + 1 <= hi - lo; ++i)
    out.cx.diffs.push_back(zero_mat(out.cx.term_dim(i + 1), out.cx.term_dim(i)));
  for (const auto& b : blocks_) {
    const auto& from_list = summands_.at(b.from.degree);
    const auto& to_list = summands_.at(b.to.degree);
    const Summand& fs = from_list[static_cast<std::size_t>(b.from.index)];
    const Summand& ts = to_list[static_cast<std::size_t>(b.to.index)];
    if (b.mat.rows() != ts.dim || b.mat.cols() != fs.dim) throw DomainError("ComplexBuilder: block shape mismatch");
    Eigen::Index ro = out.offset_of(b.to.degree, ts.label);
    Eigen::Index co = out.offset_of(b.from.degree, fs.label);
    out.cx.diffs[static_cast<std::size_t>(b.from.degree - lo)].block(ro, co, ts.dim, fs.dim) = b.mat;
  }
  if (!complex_check(out.cx)) throw DomainError("ComplexBuilder: assembled differential does not square to zero");
  return out;
}

ChainMapBuilder::ChainMapBuilder(const ComplexBuilder::Built& src, const ComplexBuilder::Built& dst)
    : src_(src), dst_(dst) {}

void ChainMapBuilder::add_block(int degree, const std::string& src_label, const std::string& dst_label, const Mat& block) {
  entries_.push_back(Entry{degree, src_label, dst_label, block});
}

ChainMap ChainMapBuilder::build() const {
  ChainMap f;
  const ChainComplex& s = src_.cx;
  const ChainComplex& d = dst_.cx;
  int lo = std::min(s.lowest_degree, d.lowest_degree);
  int hi = std::max(s.highest_degree(), d.highest_degree());
  if (s.terms.empty() && d.terms.empty()) return f;
  f.lowest_degree = lo;
  for (int deg = lo; deg <= hi; ++deg) f.blocks.push_back(zero_mat(d.dim_at_degree(deg), s.dim_at_degree(deg)));
  for (const auto& e : entries_) {
    Eigen::Index ro = dst_.offset_of(e.degree, e.dst_label);
    Eigen::Index co = src_.offset_of(e.degree, e.src_label);
    Eigen::Index rd = dst_.dim_of(e.degree, e.dst_label);
    Eigen::Index cd = src_.dim_of(e.degree, e.src_label);
    if (e.mat.rows() != rd || e.mat.cols() != cd) throw DomainError("ChainMapBuilder: block shape mismatch");
    f.blocks[static_cast<std::size_t>(e.degree - lo)].block(ro, co, rd, cd) = e.mat;
  }
  return f;
}

}  // namespace hyparr
