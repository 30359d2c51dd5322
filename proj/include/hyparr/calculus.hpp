#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hyparr/hypsheaf.hpp"

// Executable calculus on hyperbolic sheaves: global cohomology, stalks,
// vanishing cycles, specialization along a flat, the Fourier-Sato style
// transform over the dual arrangement, and consistency experiments. Every
// operation builds cone-selected subquotient complexes of the two
// fundamental complexes and certifies the acyclicity the theory promises.

namespace hyparr {

enum class Variant { kGamma, kDelta };
enum class Grading { kByDim, kByCodim, kRelative };

struct SelectionComplex {
  ConeSelection selection;
  Grading grading = Grading::kByDim;
  Variant variant = Variant::kGamma;
  ComplexBuilder::Built built;

  const ChainComplex& complex() const { return built.cx; }
};

/// gamma (x) epsilon complex over all faces graded by dim; compactly
/// supported global cohomology.
CohomologyReport rgamma_compact(const HyperbolicSheaf& q);
ChainComplex rgamma_compact_complex(const HyperbolicSheaf& q);

/// delta (x) epsilon complex over all faces graded by dim - n; global
/// cohomology.
CohomologyReport rgamma_full(const HyperbolicSheaf& q);
ChainComplex rgamma_full_complex(const HyperbolicSheaf& q);

/// delta (x) epsilon complex over B >= A graded by codim(B); the ordinary
/// stalk at A as a complex.
CohomologyReport ordinary_stalk(const HyperbolicSheaf& q, int face);
ChainComplex ordinary_stalk_complex(const HyperbolicSheaf& q, int face);

/// Recomputes E_A as the total complex of the ordinary-stalk double complex
/// and checks concentration in degree 0 with rank dims[A].
bool hyperbolic_from_stalks_check(const HyperbolicSheaf& q, int face);

struct VanishingCycles {
  Eigen::Index dim = 0;
  SelectionComplex gamma_cx;        // degrees 0..k, E_A leftmost
  SelectionComplex delta_cx;        // degrees -k..0, E_A rightmost
  std::map<int, bool> laplacian;    // positive degree -> Laplacian invertible
};

/// Vanishing cycles along the polarization f at a face A spanning a flat of
/// ker f. Enforces acyclicity of both selection complexes and equality of
/// the two degree-0 ranks.
VanishingCycles vanishing_cycles(const HyperbolicSheaf& q, const RowVec& f, int face);

struct SpecializeResult {
  HyperbolicSheaf sheaf;            // on the product arrangement
  DerivedArrangements geometry;
};

/// Specialization along a flat: fiberwise kernels of the gamma complexes
/// with structure maps induced by chain maps; the delta side is transported
/// onto the kernel model and normalized so axiom (i) holds on covers.
SpecializeResult specialize(const HyperbolicSheaf& q, const Flat& L);

/// Iterated specialization along N <= M agrees with the one-shot face-map
/// version in per-face dimensions, all outputs valid.
bool bispec_consistency(const HyperbolicSheaf& q, const Flat& N, const Flat& M);

struct FourierResult {
  HyperbolicSheaf sheaf;  // on the dual arrangement's face poset
  Arrangement dual;
};

/// Hyperbolic stalks of the transform over the dual arrangement: kernels of
/// the small-dual-cone gamma complexes; delta is the native quotient map,
/// gamma comes from the dagger complexes via transport plus axiom (i)
/// normalization. Requires an essential arrangement.
FourierResult fourier(const HyperbolicSheaf& q);

/// Double-complex route (big dual cones, delta differentials) against the
/// small-cone kernel route: total cohomology must be concentrated in one
/// degree with matching rank.
bool fourier_cross_check(const HyperbolicSheaf& q, int a_dual);
bool fourier_cross_check_all(const HyperbolicSheaf& q);

/// Corrected inclusion-exclusion identities between indicator coefficients
/// of big and small dual cones, checked per (dual face, primal face).
bool inclusion_exclusion_check(const Arrangement& arr);

struct MicroResult {
  std::optional<HyperbolicSheaf> sheaf;  // on induced x dual(quotient)
  bool ok = false;
  std::vector<std::string> issues;
};

/// Experimental: fiberwise small-cone kernel formula in the second factor
/// after specializing along L. Failures are reported, not thrown.
MicroResult microlocalize_experimental(const HyperbolicSheaf& q, const Flat& L);

}  // namespace hyparr
