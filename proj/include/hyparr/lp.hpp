#pragma once

#include <optional>

#include "hyparr/qlinalg.hpp"

namespace hyparr {

/// Homogeneous cone system: E x = 0, S x > 0 (componentwise), N x >= 0.
struct ConeSystem {
  Mat equalities;
  Mat stricts;
  Mat nonstricts;
  Eigen::Index dim = 0;

  static ConeSystem empty(Eigen::Index n) {
    return ConeSystem{zero_mat(0, n), zero_mat(0, n), zero_mat(0, n), n};
  }
};

/// Exact feasibility of a homogeneous system with strict inequalities.
/// Returns a rational witness, or nothing when the open cone is empty.
/// Because the system is a cone, strict rows are scaled to S x >= 1 and the
/// question becomes a phase-1 simplex run over Q.
std::optional<Vec> feasible_point(const ConeSystem& sys);

}  // namespace hyparr
