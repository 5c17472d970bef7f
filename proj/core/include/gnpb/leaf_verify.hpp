#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gnpb/qstate.hpp"

namespace gnpb {

struct LabeledKet {
  std::string label;
  Ket ket;
};

struct StrategyNode {
  enum class Kind { Done, SingleParty, Detach, Split, Measure };
  Kind kind = Kind::Done;
  std::string party;
  /// Detach: the dropped tags. Measure: the basis description.
  std::vector<std::string> tags;
  std::string basis;
  /// Labels handled by this node.
  std::vector<std::string> labels;
  std::vector<StrategyNode> children;
};

struct LeafStrategy {
  StrategyNode root;
  /// Subsystems some step of the strategy measures.
  std::set<std::string> acted_tags;
};

/// Sufficient LOCC check for a set of orthogonal states sharing one space:
/// recursively detaches common pure factors, splits a party's supports into
/// orthogonal blocks, or lets a party measure a full basis (computational or
/// paired (|x⟩±|y⟩)/√2) that keeps the conditional states orthogonal.
std::optional<LeafStrategy> leaf_verify(const std::vector<LabeledKet>& states, double tol = kTol);

std::string strategy_to_text(const StrategyNode& node, int indent = 0);

}  // namespace gnpb
