#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyparr/qlinalg.hpp"

// Chain complexes of finite-dimensional Q-vector spaces with labeled
// summands. Cohomological convention: the differential at degree d maps the
// degree-d term to the degree-(d+1) term.

namespace hyparr {

struct Summand {
  std::string label;
  Eigen::Index dim = 0;
};

struct ChainComplex {
  int lowest_degree = 0;
  std::vector<std::vector<Summand>> terms;  // index i holds degree lowest_degree + i
  std::vector<Mat> diffs;                   // diffs[i] : term i -> term i+1

  int num_terms() const { return static_cast<int>(terms.size()); }
  int highest_degree() const { return lowest_degree + num_terms() - 1; }
  bool has_degree(int d) const { return d >= lowest_degree && d <= highest_degree(); }
  Eigen::Index term_dim(int idx) const;
  Eigen::Index dim_at_degree(int d) const { return has_degree(d) ? term_dim(d - lowest_degree) : 0; }
  /// Differential leaving degree d (zero-sized when absent).
  Mat diff_from_degree(int d) const;
};

/// Counters for the d^2 = 0 audit across a whole run.
std::uint64_t complexes_checked_ok();
std::uint64_t complexes_checked_failed();
void reset_complex_counters();

/// True iff shapes are consistent and every consecutive composite is zero.
/// Counts the outcome in the global audit counters.
bool complex_check(const ChainComplex& c);

struct CohomologyReport {
  std::map<int, Eigen::Index> ranks;  // degree -> rank H^degree (absent = 0)
  std::optional<Mat> h0_kernel_basis;
  std::optional<Mat> h0_cokernel_projection;

  Eigen::Index rank_at(int d) const {
    auto it = ranks.find(d);
    return it == ranks.end() ? 0 : it->second;
  }
  Eigen::Index total_rank() const;
  /// True iff the only nonzero cohomology sits in degree d.
  bool concentrated_in(int d) const;
  bool acyclic_above(int d) const;
  bool acyclic_below(int d) const;
};

/// Ranks of all cohomology groups; rejects non-complexes. The degree-0
/// kernel basis is populated when degree 0 exists and has no incoming
/// differential (or a zero one); the cokernel presentation when it has no
/// outgoing differential (or a zero one).
CohomologyReport cohomology(const ChainComplex& c);

enum class H0Model { kKernel, kCokernel };

struct ChainMap {
  int lowest_degree = 0;
  std::vector<Mat> blocks;  // blocks[i] : src term at degree lowest_degree+i -> dst term
};

/// Verifies the chain-map equations and returns the induced map on
/// degree-0 cohomology in the requested model's coordinates.
Mat induced_h0_map(const ChainComplex& src, const ChainComplex& dst, const ChainMap& f, H0Model model);

/// gamma_cx lives in degrees 0..k, delta_cx in degrees -k..0 with mirrored
/// terms; for each positive degree p reports whether the Laplacian
/// delta.gamma + gamma.delta is invertible on term p.
std::map<int, bool> laplacian_report(const ChainComplex& gamma_cx, const ChainComplex& delta_cx);

/// Incremental assembly of a labeled complex from summands and blocks.
/// build() checks d^2 = 0 and aborts on failure; the sign conventions
/// upstream are supposed to guarantee it, so a failure is a hard bug.
class ComplexBuilder {
 public:
  struct Handle {
    int degree = 0;
    int index = -1;  // position within the degree
  };

  Handle add_summand(int degree, const std::string& label, Eigen::Index dim);
  /// Block from a summand at degree d to one at degree d+1.
  void add_block(const Handle& from, const Handle& to, const Mat& block);

  struct Built {
    ChainComplex cx;
    // Per summand: its coordinate offset inside the assembled term.
    std::map<std::pair<int, std::string>, std::pair<Eigen::Index, Eigen::Index>> layout;  // (degree,label) -> (offset, dim)

    Eigen::Index offset_of(int degree, const std::string& label) const;
    Eigen::Index dim_of(int degree, const std::string& label) const;
    bool has(int degree, const std::string& label) const;
  };

  Built build() const;

 private:
  struct Block {
    Handle from, to;
    Mat mat;
  };
  std::map<int, std::vector<Summand>> summands_;
  std::vector<Block> blocks_;
};

/// Assembles a chain map between two built complexes from labeled blocks.
class ChainMapBuilder {
 public:
  ChainMapBuilder(const ComplexBuilder::Built& src, const ComplexBuilder::Built& dst);
  void add_block(int degree, const std::string& src_label, const std::string& dst_label, const Mat& block);
  ChainMap build() const;

 private:
  const ComplexBuilder::Built& src_;
  const ComplexBuilder::Built& dst_;
  struct Entry {
    int degree;
    std::string src_label, dst_label;
    Mat mat;
  };
  std::vector<Entry> entries_;
};

}  // namespace hyparr
