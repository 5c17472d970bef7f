#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gnpb/qstate.hpp"

namespace gnpb {

/// Named single-party kets: "0".."3", and eta/xi/kappa/chi with a trailing
/// sign, e.g. "xi-" = (|1⟩ - |2⟩)/√2.
Eigen::VectorXcd local_ket(int dim, std::string_view name);

/// (|i⟩ + sign|j⟩)/√2 in dimension dim.
Eigen::VectorXcd twisted_ket(int dim, int i, int j, int sign);

enum class ResourceKind { EPR, EPR3, GHZ, W };

std::string_view resource_name(ResourceKind kind);
std::optional<ResourceKind> parse_resource_kind(std::string_view name);
int resource_arity(ResourceKind kind);
int resource_local_dim(ResourceKind kind);
Eigen::VectorXcd resource_amplitudes(ResourceKind kind);
/// Entropy across any single-party cut.
double resource_cut_ebits(ResourceKind kind);
/// Bipartite kinds fold into the ebit total; GHZ and W are reported in their own unit.
bool resource_counts_as_ebits(ResourceKind kind);
Ket resource_ket(ResourceKind kind, std::span<const std::string> owners, std::span<const std::string> tags);

struct PartySpec {
  std::string name;
  int dim = 0;
  bool operator==(const PartySpec&) const = default;
};

struct ProductState {
  std::string label;
  std::vector<Eigen::VectorXcd> factors;
};

class OrthoProductBasis {
 public:
  OrthoProductBasis() = default;
  OrthoProductBasis(std::string name, std::vector<PartySpec> parties, std::vector<ProductState> states);

  const std::string& name() const { return name_; }
  const std::vector<PartySpec>& parties() const { return parties_; }
  const std::vector<ProductState>& states() const { return states_; }
  std::size_t size() const { return states_.size(); }
  std::size_t total_dim() const;
  bool complete() const { return size() == total_dim(); }

  /// Principal registers only; each party owns one subsystem tagged with its name.
  CompositeSpace space() const;
  Ket ket(std::size_t i) const;
  std::optional<std::size_t> index_of(std::string_view label) const;
  std::size_t party_index(std::string_view party) const;

 private:
  std::string name_;
  std::vector<PartySpec> parties_;
  std::vector<ProductState> states_;
};

struct IntegrityReport {
  std::string name;
  std::size_t cardinality = 0;
  std::size_t total_dim = 0;
  double max_overlap = 0.0;
  std::size_t completeness_rank = 0;
  std::vector<PartySpec> local_dims;
  std::vector<std::string> unnormalized;

  bool orthogonal() const { return max_overlap < kTol; }
  bool complete() const { return completeness_rank == total_dim; }
  bool passed() const { return orthogonal() && unnormalized.empty(); }
};

IntegrityReport check_basis(const OrthoProductBasis& b);
std::string integrity_to_json(const IntegrityReport& r, int indent = 2);

OrthoProductBasis bennett_npb_3x3();
OrthoProductBasis basis_I_43();
OrthoProductBasis basis_II_43();
OrthoProductBasis basis_II_33();
OrthoProductBasis basis_IIb_33();
OrthoProductBasis shift_upb_opb_222();

std::vector<std::string> builtin_basis_names();
/// Throws std::out_of_range for an unknown name.
OrthoProductBasis builtin_basis(std::string_view name);

/// Reorders the parties; states keep their labels.
OrthoProductBasis permute_parties(const OrthoProductBasis& b, std::span<const std::size_t> order);

std::string basis_to_json(const OrthoProductBasis& b, int indent = 2);
/// Throws std::invalid_argument on malformed documents.
OrthoProductBasis basis_from_json(std::string_view text, std::string fallback_name = "imported");

struct TileRendering {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::size_t tile_count = 0;
  std::vector<std::string> non_interval;
  std::string text;
};

/// Bipartite grid view with `row_group` merged into the row index and the
/// remaining parties into the column index. A state is a tile when both of its
/// supports are contiguous computational intervals; states sharing a rectangle
/// form one tile.
TileRendering render_tiles(const OrthoProductBasis& b, std::span<const std::string> row_group);

}  // namespace gnpb
