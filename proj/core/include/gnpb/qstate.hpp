#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "gnpb/tolerance.hpp"

namespace gnpb {

using Complex = std::complex<double>;

struct SubsystemLabel {
  std::string owner;
  std::string tag;
  bool operator==(const SubsystemLabel&) const = default;
};

struct Subsystem {
  SubsystemLabel label;
  int dim = 0;
  bool operator==(const Subsystem&) const = default;
};

/// Ordered tensor factors, addressed by tag. Row-major: the last subsystem
/// varies fastest in the flat index.
class CompositeSpace {
 public:
  CompositeSpace() = default;
  explicit CompositeSpace(std::vector<Subsystem> subsystems);

  static CompositeSpace single(std::string owner, std::string tag, int dim);

  const std::vector<Subsystem>& subsystems() const { return subsystems_; }
  std::size_t size() const { return subsystems_.size(); }
  std::size_t total_dim() const;

  std::optional<std::size_t> find(std::string_view tag) const;
  std::size_t position(std::string_view tag) const;
  const Subsystem& at(std::string_view tag) const;
  bool contains(std::string_view tag) const { return find(tag).has_value(); }

  /// Distinct owners in order of first appearance.
  std::vector<std::string> parties() const;
  std::vector<std::string> tags_of(std::string_view owner) const;
  std::vector<std::string> tags() const;
  std::size_t dim_of(std::span<const std::string> tags) const;

  bool operator==(const CompositeSpace&) const = default;

 private:
  std::vector<Subsystem> subsystems_;
};

/// Concatenation a ⊗ b; throws std::invalid_argument on a tag collision.
CompositeSpace concat(const CompositeSpace& a, const CompositeSpace& b);

struct Ket {
  CompositeSpace space;
  Eigen::VectorXcd amplitudes;

  double norm() const { return amplitudes.norm(); }
};

Ket make_ket(CompositeSpace space, Eigen::VectorXcd amplitudes);
Ket computational_ket(CompositeSpace space, std::span<const int> digits);

struct Operator {
  CompositeSpace space;
  Eigen::MatrixXcd matrix;
};

bool is_hermitian(const Eigen::MatrixXcd& m, double tol = kTol);
bool is_projector(const Eigen::MatrixXcd& m, double tol = kTol);

Ket tensor(std::span<const Ket> factors);
Ket tensor(const Ket& a, const Ket& b);
Complex inner(const Ket& a, const Ket& b);

/// (op ⊗ I)|ψ⟩ without renormalization. op.space names the acted tags in the
/// order its matrix uses.
Ket apply_local(const Operator& op, const Ket& state);

struct EffectResult {
  double probability = 0.0;
  std::optional<Ket> post_state;
};

/// Born rule for a projective effect. Throws std::invalid_argument if the
/// effect is not a projector.
EffectResult apply_effect(const Operator& effect, const Ket& state, double tol = kTol);

/// Reduced density matrix on `keep`, in the order given.
Eigen::MatrixXcd reduced_density(const Ket& state, std::span<const std::string> keep);

/// Entanglement entropy (base 2) across side | complement.
double schmidt_ebits(const Ket& state, std::span<const std::string> side);

/// (⟨v| ⊗ I)|ψ⟩ where v lives on `tags` in the order given.
Ket contract(const Ket& state, std::span<const std::string> tags, const Eigen::VectorXcd& v);

/// Fuses `source` into `destination`: the new subsystem sits where destination
/// was, carries tag `merged_tag` and owner of destination, and its index is
/// i_dst * d_src + j_src.
Ket merge_subsystems(const Ket& state, std::string_view destination, std::string_view source,
                     std::string merged_tag);

/// Hands every subsystem owned by `from` to `to`.
Ket reassign_owner(const Ket& state, std::string_view from, std::string_view to);

/// Reorders subsystems to `order` (a permutation of the current tags).
Ket permute(const Ket& state, std::span<const std::string> order);

namespace detail {

/// For each flat index of `space`, its index within the selected subsystems
/// (in the order of `positions`) and within the remaining ones (space order).
struct IndexSplit {
  std::vector<std::size_t> selected;
  std::vector<std::size_t> remainder;
  std::size_t selected_dim = 1;
  std::size_t remainder_dim = 1;
};

IndexSplit split_indices(const CompositeSpace& space, std::span<const std::size_t> positions);

/// Amplitudes reshaped as (selected_dim × remainder_dim).
Eigen::MatrixXcd as_matrix(const Ket& state, const IndexSplit& split);

}  // namespace detail

}  // namespace gnpb
