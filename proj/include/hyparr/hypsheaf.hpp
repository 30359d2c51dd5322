#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hyparr/arrangement.hpp"
#include "hyparr/chain_complex.hpp"

// Linear-algebra sheaf data on a face poset: one space per face, a
// generalization map gamma and a specialization map delta on every covering
// pair, subject to the flop axioms checked by validate().

namespace hyparr {

struct HyperbolicSheaf {
  FacePoset poset;
  std::vector<Eigen::Index> dims;                 // dim E_A per face
  std::map<std::pair<int, int>, Mat> gamma;       // (a <_1 b) -> matrix E_a -> E_b
  std::map<std::pair<int, int>, Mat> delta;       // (a <_1 b) -> matrix E_b -> E_a

  Eigen::Index dim_of(int face) const { return dims[static_cast<std::size_t>(face)]; }
  /// Composite generalization map E_a -> E_b for a <= b along a fixed chain.
  Mat gamma_path(int a, int b) const;
  /// Composite specialization map E_b -> E_a for a <= b.
  Mat delta_path(int b, int a) const;
};

struct ValidationReport {
  bool shapes_ok = true;
  bool gamma_functorial = true;
  bool delta_functorial = true;
  bool axiom_i = true;
  bool flop_independent = true;
  bool axiom_ii = true;
  bool axiom_iii = true;
  std::string first_failure;        // empty when ok()
  std::vector<int> offending;       // face indices of the first failure

  bool ok() const {
    return shapes_ok && gamma_functorial && delta_functorial && axiom_i && flop_independent && axiom_ii && axiom_iii;
  }
};

/// Checks, in order: shapes, chain functoriality of gamma and delta,
/// axiom (i) gamma.delta = id on comparable pairs, independence of the flop
/// of the chosen lower bound, axiom (ii) on collinear triples (collinearity
/// decided by exact segment tests over the stored witness pairs), and
/// axiom (iii) invertibility of the flop across every wall.
ValidationReport validate(const HyperbolicSheaf& q);

/// Throws DomainError when the sheaf is invalid; convenience precondition.
void require_valid(const HyperbolicSheaf& q, const std::string& who);

/// Flop operator phi_{ab} = gamma_{cb} delta_{ac} through the minimal face.
Mat flop(const HyperbolicSheaf& q, int a, int b);

/// (E_A, gamma, delta) -> (E_A*, delta*, gamma*).
HyperbolicSheaf verdier_dual(const HyperbolicSheaf& q);

HyperbolicSheaf constant_sheaf(const FacePoset& poset);
/// Rank one on the minimal face, zero elsewhere.
HyperbolicSheaf skyscraper_sheaf(const FacePoset& poset);
HyperbolicSheaf direct_sum(const HyperbolicSheaf& a, const HyperbolicSheaf& b);

bool sheaves_equal(const HyperbolicSheaf& a, const HyperbolicSheaf& b);

/// Does the closed segment [x, z] meet the face?
bool segment_meets_face(const FacePoset& poset, const Vec& x, const Vec& z, int face);

/// Exact segment test over the stored witness pairs of a and c.
bool collinear_triple(const FacePoset& poset, int a, int b, int c);

}  // namespace hyparr
