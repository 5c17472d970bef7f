#pragma once

// Reference computations that share no code with the library: full product
// vectors by explicit index arithmetic, ranks by full-pivot LU, and the OPM
// solution space by a Gram-Schmidt sweep over explicit constraint rows.

#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gnpb/bases.hpp"

namespace oracle {

Eigen::VectorXcd full_vector(const std::vector<Eigen::VectorXcd>& factors);

struct GramStats {
  double max_overlap = 0.0;
  double max_norm_error = 0.0;
  int rank = 0;
};

GramStats gram_stats(const gnpb::OrthoProductBasis& b);

/// Generalized Gell-Mann basis of Hermitian d x d matrices plus the identity (d^2 elements).
std::vector<Eigen::MatrixXcd> hermitian_basis(int d);

/// Dimension of {E on `group` : <psi_i| E (x) I |psi_j> = 0 for all i != j}.
int opm_dim_sweep(const gnpb::OrthoProductBasis& b, const std::vector<std::string>& group);

/// Random orthogonal product set in 2x2x2 with `count` states (1..8), built by
/// recursive local splitting. Some splits use the computational basis so that
/// degenerate solution spaces show up.
gnpb::OrthoProductBasis random_opb_222(std::mt19937& rng, int count);

}  // namespace oracle
