#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gnpb/qstate.hpp"

namespace gnpb {

/// A computational ket |first⟩, or (|first⟩ + sign|second⟩)/√2 when second >= 0.
struct KetSpec {
  int first = 0;
  int second = -1;
  int sign = 1;

  bool twisted() const { return second >= 0; }
  bool operator==(const KetSpec&) const = default;
};

/// Projector factor on one subsystem: Σ|k⟩⟨k| over kets, or the identity.
struct KetList {
  std::string label;
  bool identity = false;
  std::vector<KetSpec> kets;
  bool operator==(const KetList&) const = default;
};

struct ProjectorTerm {
  std::vector<KetList> factors;
  bool operator==(const ProjectorTerm&) const = default;
};

/// Sum of P[...] terms. `rest` stands for I minus every other effect of the node.
struct ProjectorExpr {
  bool rest = false;
  std::vector<ProjectorTerm> terms;
  bool operator==(const ProjectorExpr&) const = default;
};

Eigen::VectorXcd ket_vector(const KetSpec& k, int dim);
Eigen::MatrixXcd ketlist_projector(const KetList& k, int dim);

struct EvaluatedEffects {
  /// Union of mentioned subsystems, in the order of the enclosing space.
  CompositeSpace acted;
  std::vector<Eigen::MatrixXcd> effects;
};

/// Evaluates a node's effects on `space`, padding unmentioned acted subsystems
/// with identities. Throws std::invalid_argument on unknown labels, repeated
/// labels inside one term, out-of-range kets or more than one rest effect.
EvaluatedEffects evaluate_effects(std::span<const ProjectorExpr> exprs, const CompositeSpace& space);

/// Tags on which the node's effects restrict to something other than identity.
std::vector<std::string> nontrivial_tags(std::span<const ProjectorExpr> exprs, const CompositeSpace& space);

// Transcription helpers.
inline KetSpec ket(int k) { return KetSpec{k, -1, 1}; }
inline KetSpec twist(int i, int j, int sign) { return KetSpec{i, j, sign}; }
KetList on(std::string label, std::initializer_list<int> kets);
KetList on(std::string label, std::vector<KetSpec> kets);
KetList id(std::string label);
ProjectorTerm P(std::initializer_list<KetList> factors);
ProjectorExpr sum(std::initializer_list<ProjectorTerm> terms);
ProjectorExpr rest();

}  // namespace gnpb
