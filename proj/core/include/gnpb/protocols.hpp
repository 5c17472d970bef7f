#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gnpb/bases.hpp"
#include "gnpb/protocol_tree.hpp"

namespace gnpb {

struct ResourceDecl {
  ResourceKind kind = ResourceKind::EPR;
  std::vector<std::string> parties;
  std::vector<std::string> tags;
  bool operator==(const ResourceDecl&) const = default;
};

struct NamedProtocol {
  std::string name;
  std::string basis;
  std::vector<PartySpec> parties;
  std::vector<ResourceDecl> resources;
  /// Tree as written, possibly with Mirror placeholders.
  NodePtr partial;
  /// Tree with every Mirror expanded.
  NodePtr root;
  /// Set when a party merge stands in for a cheaper protocol.
  bool upper_bound = false;
};

enum class Prop5Target { II_33, IIb_33 };

NamedProtocol prop5_protocol(Prop5Target target);
NamedProtocol prop6_protocol();
NamedProtocol prop7_protocol();
NamedProtocol prop8_protocol();
NamedProtocol remark2_protocol();
NamedProtocol basis_I_43_protocol();

struct ShiftOptions {
  /// Ancilla tags of the EPR: measurer side, partner side.
  std::string measurer_tag;
  std::string partner_tag;
  /// Levels of the measurer's register playing the roles of 0 and 1.
  int level0 = 0;
  int level1 = 1;
  /// Leaf labels; defaults to the canonical shift-UPB basis labels.
  std::vector<std::string> labels;
  /// When false the EPR is assumed to be present already.
  bool attach_epr = true;
};

/// The first endpoint measures its register tagged by its EPR half; both
/// outcomes leave the 8 states locally distinguishable.
NodePtr shift_upb_subprotocol(std::pair<std::string, std::string> epr_endpoints, ShiftOptions opt = {});

/// Stand-alone protocol on shift_upb_opb_222 with the EPR between the two endpoints.
NamedProtocol shift_upb_protocol(std::pair<std::string, std::string> epr_endpoints);

std::vector<std::string> builtin_protocol_names();
/// Throws std::out_of_range for an unknown name.
NamedProtocol builtin_protocol(std::string_view name);

}  // namespace gnpb
