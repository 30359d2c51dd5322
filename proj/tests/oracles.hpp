#pragma once

#include <set>
#include <string>
#include <vector>

#include "hyparr/arrangement.hpp"

// Independent test oracles. These deliberately avoid the library's simplex
// and elimination code paths: feasibility is decided by Fourier-Motzkin
// elimination, ranks by cofactor-expansion minors.

namespace hyparr::oracles {

/// Feasibility of { e x = 0 for e in eqs, s x > 0 for s in stricts } by
/// exact Fourier-Motzkin elimination.
bool fm_feasible(std::vector<RowVec> eqs, std::vector<RowVec> stricts, Eigen::Index dim);

/// All realizable sign vectors of the arrangement, by brute force over the
/// full 3^m grid with Fourier-Motzkin feasibility checks.
std::set<std::string> brute_force_sign_vectors(const Arrangement& arr);

/// Rank as the largest size of a nonzero minor, determinants by cofactor
/// expansion.
Eigen::Index rank_by_minors(const Mat& m);

/// Faces crossed by the segment from x to z, in order (consecutive
/// duplicates collapsed). Points must lie in the arrangement's space.
std::vector<int> segment_face_walk(const FacePoset& poset, const Vec& x, const Vec& z);

}  // namespace hyparr::oracles
