#pragma once

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "gnpb/bases.hpp"
#include "gnpb/projector_expr.hpp"

namespace gnpb {

struct ProtocolNode;
using NodePtr = std::shared_ptr<const ProtocolNode>;

struct Effect {
  std::string name;
  ProjectorExpr expr;
};

struct Measure {
  std::string actor;
  std::vector<Effect> effects;
  std::map<std::string, NodePtr> children;
};

struct AttachResource {
  ResourceKind kind = ResourceKind::EPR;
  std::vector<std::string> parties;
  std::vector<std::string> tags;
  NodePtr child;
};

/// Party `source` hands its principal register to `destination`. `dim` is the
/// teleported dimension and fixes the cost at log2(dim) ebits.
struct MergeParties {
  std::string source;
  std::string destination;
  int dim = 0;
  NodePtr child;

  double cost() const;
};

struct Identify {
  std::string label;
};

struct DistinguishableSet {
  std::vector<std::string> labels;
};

struct Fail {};

/// Local level permutations keyed by subsystem tag: level k maps to perm[k].
struct Symmetry {
  std::map<std::string, std::vector<int>> permutations;
  bool operator==(const Symmetry&) const = default;
};

/// Placeholder for a sibling outcome obtained by conjugating `source` under `symmetry`.
struct Mirror {
  std::string source;
  Symmetry symmetry;
};

struct ProtocolNode {
  std::variant<Measure, AttachResource, MergeParties, Identify, DistinguishableSet, Fail, Mirror> body;
};

NodePtr measure(std::string actor, std::vector<Effect> effects, std::map<std::string, NodePtr> children);
NodePtr attach(ResourceKind kind, std::vector<std::string> parties, std::vector<std::string> tags, NodePtr child);
NodePtr merge(std::string source, std::string destination, int dim, NodePtr child);
NodePtr identify(std::string label);
NodePtr distinguishable(std::vector<std::string> labels);
NodePtr fail();
NodePtr mirror(std::string source, Symmetry symmetry);

/// Qubit swap 0↔1 on each named tag.
Symmetry swap01(std::initializer_list<std::string> tags);

bool structurally_equal(const NodePtr& a, const NodePtr& b);

/// Relabels every ket of every effect below `node`; leaves are kept as is.
/// Throws std::invalid_argument if a permutation is not a bijection.
NodePtr conjugate(const NodePtr& node, const Symmetry& sym);

/// Replaces each Mirror child by the conjugate of its (expanded) source sibling.
/// Throws std::invalid_argument for a missing or mirrored source.
NodePtr expand_mirrors(const NodePtr& node);

bool contains_mirror(const NodePtr& node);
std::size_t node_count(const NodePtr& node);

}  // namespace gnpb
