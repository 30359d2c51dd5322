#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyparr/lp.hpp"
#include "hyparr/qlinalg.hpp"

// Combinatorial geometry of a finite central arrangement of rational
// hyperplanes: faces (realizable sign vectors with certified rational
// witnesses), the face poset with incidence signs, flats, dual
// arrangements, cone selections and specialization face maps.

namespace hyparr {

struct Arrangement {
  Eigen::Index dim = 0;
  std::vector<RowVec> hyperplanes;

  Eigen::Index size() const { return static_cast<Eigen::Index>(hyperplanes.size()); }
  /// All hyperplane covectors stacked into a size x dim matrix.
  Mat covector_matrix() const;
  /// The intersection of all hyperplanes is 0.
  bool essential() const;
  std::string canonical_string() const;
  std::string hash() const;
};

/// Validates covectors (nonzero, pairwise non-proportional).
Arrangement make_arrangement(Eigen::Index dim, std::vector<RowVec> hyperplanes);

char sign_char(int s);
int sign_of_char(char c);

struct Face {
  std::vector<std::int8_t> signs;
  Eigen::Index dim = 0;
  Mat span_basis;      // n x dim, deterministic reduced echelon basis of Lin(A)
  Vec interior_point;  // rational witness realizing exactly these signs
  Vec second_point;    // a second witness (equal to the first on 0-dim faces)

  std::string sign_string() const;
};

struct FacePoset {
  Arrangement arr;
  std::vector<Face> faces;  // sorted by (dim, sign string)
  std::vector<std::pair<int, int>> covers;
  std::map<std::pair<int, int>, int> incidence;  // covering pair -> +-1

  int size() const { return static_cast<int>(faces.size()); }
  bool leq(int a, int b) const;
  int face_index(const std::string& signs) const;  // -1 when absent
  int minimal_face() const;                        // the all-zero face
  Eigen::Index dim_of(int i) const { return faces[static_cast<std::size_t>(i)].dim; }
  const std::vector<int>& upper_covers(int i) const { return upper_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& lower_covers(int i) const { return lower_[static_cast<std::size_t>(i)]; }
  std::vector<int> faces_of_dim(Eigen::Index d) const;
  /// Cone system whose relative interior is face i.
  ConeSystem face_system(int i) const;

  // filled by enumerate_faces
  std::vector<std::vector<int>> upper_, lower_;
  std::map<std::string, int> index_;
};

/// Enumerates exactly the realizable sign vectors by incremental hyperplane
/// insertion; every face carries a certified rational interior point.
FacePoset enumerate_faces(const Arrangement& arr);

/// Incidence sign for a covering pair B <_1 C: compares the orientation
/// [span_basis(B), interior_point(C)] of Lin(C) against span_basis(C).
int incidence_sign(const FacePoset& poset, int lower, int upper);

struct Flat {
  std::vector<int> zero_set;  // maximal set of hyperplanes containing the flat
  Eigen::Index dim = 0;
  Mat basis;  // n x dim
};

/// All distinct intersections of subsets of hyperplanes, the ambient space
/// included, sorted by (dim descending, zero set).
std::vector<Flat> intersection_poset(const Arrangement& arr);

/// The flat spanned by the intersection of the given hyperplanes.
Flat flat_of_hyperplanes(const Arrangement& arr, const std::vector<int>& hyperplanes);

/// Is the subspace spanned by `inner`'s basis contained in `outer`'s?
bool flat_subset(const Flat& inner, const Flat& outer);

/// One dual hyperplane per 1-dimensional flat; errors when there are none.
Arrangement dual_arrangement(const Arrangement& arr);

struct ConeSelection {
  enum class Tag { kUCone, kVCone, kNuFiber, kHalfSpace, kCustom };
  Tag tag = Tag::kCustom;
  std::vector<int> face_ids;  // sorted ascending

  bool contains(int id) const;
};

const char* cone_tag_name(ConeSelection::Tag tag);

/// Everywhere-sign predicates, decided by exact feasibility of the
/// violating system. `f` is a covector on the primal space.
bool f_nonneg_on_face(const FacePoset& poset, int face, const RowVec& f);
bool f_positive_on_face(const FacePoset& poset, int face, const RowVec& f);

/// Precomputed big/small dual cone machinery for a primal poset and the
/// face poset of its dual arrangement.
class DualGeometry {
 public:
  DualGeometry(const FacePoset& primal, const FacePoset& dual);

  const FacePoset& primal() const { return primal_; }
  const FacePoset& dual() const { return dual_; }
  /// Faces of U(a_dual): f >= 0 holds everywhere, f any covector interior
  /// to the dual face.
  ConeSelection u_cone(int a_dual) const;
  /// Faces of V(a_dual) = intersection of U(chamber) over dual chambers
  /// above a_dual.
  ConeSelection v_cone(int a_dual) const;

 private:
  const FacePoset& primal_;
  const FacePoset& dual_;
  std::vector<int> chambers_;                      // dual chamber indices
  std::vector<std::vector<bool>> chamber_u_;       // per chamber, per primal face
};

std::pair<ConeSelection, ConeSelection> dual_cones(const FacePoset& primal, const FacePoset& dual_poset, int a_dual);

/// U anti-monotone and V monotone along all dual covering pairs.
bool monotone_cones_check(const FacePoset& primal, const FacePoset& dual_poset);

/// Induced, quotient and product arrangements for a flat L, together with
/// the face specialization map nu_L.
struct DerivedArrangements {
  Flat flat;
  Arrangement induced;   // on L, coordinates = columns of flat.basis
  Arrangement quotient;  // on V/L, coordinates = complement coordinate set
  Arrangement product;   // on L x V/L
  FacePoset induced_poset;
  FacePoset quotient_poset;
  FacePoset product_poset;
  std::vector<Eigen::Index> complement;        // coordinate indices of the fixed complement
  std::vector<int> nu;                         // primal face -> product face
  std::vector<std::pair<int, int>> nu_parts;   // product face -> (induced face, quotient face)
  std::vector<std::vector<int>> fibers;        // product face -> primal faces mapping to it

  /// lambda(x) = (pi_L(x) in flat-basis coordinates, x mod L in complement
  /// coordinates); projection along the fixed complement.
  Vec to_product_coords(const Vec& x) const;

 private:
  friend DerivedArrangements derived_arrangements(const FacePoset& poset, const Flat& L);
  Mat embed_;  // n x n, [flat.basis | complement unit vectors]
};

DerivedArrangements derived_arrangements(const FacePoset& poset, const Flat& L);

/// Sign relating the transverse orientation of a <_1 a' over nu(a) <_1
/// nu(a') (the fiber-degree Koszul sign times the two incidence
/// comparisons). Errors when the dimension bookkeeping fails.
int relative_sign(const DerivedArrangements& d, const FacePoset& primal, int a, int a_prime);

/// ker f is transversal at L: every flat inside ker f lies inside L.
/// Requires f to vanish on L.
bool is_polarization(const Arrangement& arr, const Flat& L, const RowVec& f);

/// Faces crossed by the closed segment from x to z, in order, consecutive
/// repeats collapsed. Both endpoints must lie in the arrangement's space.
std::vector<int> segment_face_walk(const FacePoset& poset, const Vec& x, const Vec& z);

}  // namespace hyparr
