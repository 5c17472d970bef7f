#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnpb/bases.hpp"
#include "gnpb/leaf_verify.hpp"
#include "gnpb/protocol_tree.hpp"

namespace gnpb {

struct VerifyOptions {
  double tol = kTol;
  double ortho_tol = kOrthoTol;
};

struct NodeCheck {
  std::string path;
  std::string check;
  bool passed = true;
  std::string detail;
};

struct LeafRecord {
  std::string path;
  std::string kind;
  std::vector<std::string> declared;
  std::vector<std::string> survivors;
  bool passed = true;
  std::string strategy;
};

struct ResourceUse {
  std::string id;
  ResourceKind kind = ResourceKind::EPR;
  std::vector<std::string> parties;
  std::vector<std::string> tags;
};

struct MergeUse {
  std::string id;
  std::string source;
  std::string destination;
  int dim = 0;
};

/// One root-to-leaf path that some candidate reached.
struct BranchRecord {
  std::string path;
  std::vector<std::pair<std::string, double>> weights;
  std::vector<std::string> consumed;
  std::vector<std::string> returned;
  std::vector<std::string> merges;
  /// Party pairs or triples across which entanglement was spent on this branch.
  std::set<std::string> cuts;
  bool success = true;
};

struct LedgerEntry {
  std::string kind;
  std::vector<std::string> endpoints;
  double expected = 0.0;
  double unit_ebits = 0.0;
  bool counts_as_ebits = true;
  bool via_merge = false;
};

struct ResourceLedger {
  std::vector<LedgerEntry> entries;
  double total_ebits = 0.0;
  double ghz_expected = 0.0;
  /// Informational: two ebits distribute one GHZ state.
  double ghz_bound_ebits = 0.0;
  double w_expected = 0.0;
  int local_dim = 0;
  double baseline_ebits = 0.0;
  bool upper_bound = false;

  double expected(std::string_view kind, const std::vector<std::string>& endpoints) const;
};

struct VerificationReport {
  std::string basis;
  std::size_t state_count = 0;
  std::vector<NodeCheck> checks;
  std::vector<LeafRecord> leaves;
  std::vector<BranchRecord> branches;
  std::vector<ResourceUse> resources;
  std::vector<MergeUse> merges;
  std::vector<std::pair<std::string, double>> identification;
  std::vector<std::string> failures;
  ResourceLedger ledger;
  bool passed = false;
};

VerificationReport verify_protocol(const NodePtr& root, const OrthoProductBasis& b, const VerifyOptions& opt = {});

class VerificationFailed : public std::runtime_error {
 public:
  explicit VerificationFailed(const std::string& what) : std::runtime_error(what) {}
};

/// Requires a passing verification; throws VerificationFailed otherwise.
ResourceLedger resource_accounting(const NodePtr& root, const OrthoProductBasis& b, const VerifyOptions& opt = {});

/// Expands Mirror nodes and verifies the result against b. Throws
/// VerificationFailed naming the first failing node.
NodePtr complete_by_symmetry(const NodePtr& partial, const OrthoProductBasis& b, const VerifyOptions& opt = {});

std::string report_to_json(const VerificationReport& r, int indent = 2);
std::string ledger_to_json(const ResourceLedger& l, int indent = 2);

}  // namespace gnpb
