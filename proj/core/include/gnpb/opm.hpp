#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gnpb/bases.hpp"

namespace gnpb {

struct HermitianSolutionSpace {
  std::vector<std::string> group;
  int local_dim = 0;
  std::size_t constraint_rows = 0;
  std::vector<Eigen::MatrixXcd> basis_matrices;

  std::size_t dim() const { return basis_matrices.size(); }
  /// True when m lies in the real span of basis_matrices within tol.
  bool contains(const Eigen::MatrixXcd& m, double tol = kRankCut) const;
};

/// Real coordinates of a Hermitian d×d matrix: diagonal entries, then for each
/// k<l the pair (Re, Im) that multiplies (E_kl + E_lk) and i(E_kl - E_lk).
Eigen::VectorXd hermitian_coordinates(const Eigen::MatrixXcd& h);
Eigen::MatrixXcd hermitian_from_coordinates(const Eigen::VectorXd& x, int d);

/// Factor of state i on `group` (members in the order given).
Eigen::VectorXcd group_factor(const OrthoProductBasis& b, std::size_t i, std::span<const std::string> group);

HermitianSolutionSpace opm_solution_space(const OrthoProductBasis& b, std::span<const std::string> group);

struct PartyPartition {
  std::vector<std::vector<std::string>> groups;
};

bool is_locally_irreducible(const OrthoProductBasis& b, const PartyPartition& p);

struct Measurement {
  std::vector<std::string> group;
  std::vector<Eigen::MatrixXcd> effects;
  /// Labels of states with nonzero probability, per effect.
  std::vector<std::vector<std::string>> survivors;
};

std::optional<Measurement> find_eliminating_opm(const OrthoProductBasis& b, std::span<const std::string> group);

enum class GnpbType { TypeI, TypeIIa, TypeIIb };
std::string_view type_name(GnpbType t);

struct GroupVerdict {
  std::vector<std::string> group;
  std::size_t solution_dim = 0;
  bool reducible = false;
  std::optional<Measurement> witness;
};

struct GnpbClassification {
  std::string basis;
  std::vector<GroupVerdict> singles;
  std::vector<GroupVerdict> pairs;
  GnpbType verdict = GnpbType::TypeIIb;

  bool all_separated_reducible() const;
  bool any_pair_reducible() const;
};

/// Tripartite only; throws std::invalid_argument otherwise.
GnpbClassification classify(const OrthoProductBasis& b);

/// Short human form of a projector such as "|3><3|" or "I-|3><3|".
std::string describe_projector(const Eigen::MatrixXcd& p);

std::string classification_to_json(const GnpbClassification& c, int indent = 2);

}  // namespace gnpb
