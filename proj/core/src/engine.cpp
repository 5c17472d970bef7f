#include "gnpb/engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gnpb {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

struct Candidate {
  std::size_t state;
  Ket ket;
  double probability;
};

struct ActiveResource {
  std::string id;
  std::vector<std::string> tags;
  std::string cut;
};

struct PathState {
  std::vector<std::string> steps;
  std::map<std::string, std::string> principal;
  std::vector<ActiveResource> active;
  std::set<std::string> consumed;
  std::vector<std::string> merges;
  std::set<std::string> merge_cuts;

  std::string path() const {
    if (steps.empty()) return "(root)";
    std::string s;
    for (std::size_t i = 0; i < steps.size(); ++i) s += (i ? "/" : "") + steps[i];
    return s;
  }

  void mark_acted(const std::set<std::string>& tags) {
    for (const auto& r : active)
      for (const auto& t : r.tags)
        if (tags.count(t)) consumed.insert(r.id);
  }
};

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

std::string cut_name(std::vector<std::string> parties) {
  std::sort(parties.begin(), parties.end());
  return join(parties, "-");
}

class Runner {
 public:
  Runner(const OrthoProductBasis& b, const VerifyOptions& opt) : b_(b), opt_(opt), ident_(b.size(), 0.0) {
    report_.basis = b.name();
    report_.state_count = b.size();
  }

  VerificationReport run(const NodePtr& root) {
    std::vector<Candidate> cands;
    for (std::size_t i = 0; i < b_.size(); ++i) cands.push_back({i, b_.ket(i), 1.0});
    PathState ps;
    for (const auto& p : b_.parties()) ps.principal[p.name] = p.name;
    visit(root, std::move(cands), ps);

    for (std::size_t i = 0; i < b_.size(); ++i) {
      report_.identification.emplace_back(b_.states()[i].label, ident_[i]);
      if (std::abs(ident_[i] - 1.0) > opt_.tol) {
        std::ostringstream os;
        os << "state " << b_.states()[i].label << " identified with total probability " << ident_[i];
        report_.failures.push_back(os.str());
      }
    }
    report_.passed = report_.failures.empty();
    report_.ledger = build_ledger();
    return std::move(report_);
  }

 private:
  void fail(const std::string& path, const std::string& check, const std::string& detail) {
    report_.checks.push_back({path, check, false, detail});
    report_.failures.push_back(path + ": " + check + ": " + detail);
  }
  void pass(const std::string& path, const std::string& check, std::string detail = {}) {
    report_.checks.push_back({path, check, true, std::move(detail)});
  }

  void visit(const NodePtr& node, std::vector<Candidate> cands, PathState ps) {
    if (!node) {
      if (!cands.empty()) fail(ps.path(), "structure", "missing node");
      return;
    }
    std::visit(Overloaded{
                   [&](const Measure& m) { on_measure(m, std::move(cands), std::move(ps)); },
                   [&](const AttachResource& a) { on_attach(a, std::move(cands), std::move(ps)); },
                   [&](const MergeParties& m) { on_merge(m, std::move(cands), std::move(ps)); },
                   [&](const Identify& l) { on_identify(l, cands, ps); },
                   [&](const DistinguishableSet& l) { on_set(l, cands, ps); },
                   [&](const Fail&) { on_fail(cands, ps); },
                   [&](const Mirror& m) {
                     fail(ps.path(), "structure", "unexpanded mirror of outcome '" + m.source + "'");
                   },
               },
               node->body);
  }

  void on_attach(const AttachResource& a, std::vector<Candidate> cands, PathState ps) {
    const std::string path = ps.path();
    if (cands.empty()) return;
    const auto& space = cands.front().ket.space;
    const auto arity = static_cast<std::size_t>(resource_arity(a.kind));
    if (a.parties.size() != arity || a.tags.size() != arity) {
      fail(path, "attach", "resource arity mismatch");
      return;
    }
    const auto owners = space.parties();
    for (const auto& p : a.parties)
      if (std::find(owners.begin(), owners.end(), p) == owners.end()) {
        fail(path, "attach", "unknown party '" + p + "'");
        return;
      }
    for (const auto& t : a.tags)
      if (space.contains(t)) {
        fail(path, "attach", "subsystem tag '" + t + "' is not fresh");
        return;
      }
    Ket res;
    try {
      res = resource_ket(a.kind, a.parties, a.tags);
    } catch (const std::invalid_argument& e) {
      fail(path, "attach", e.what());
      return;
    }
    const std::string id =
        std::string(resource_name(a.kind)) + "(" + join(a.parties, ",") + ")[" + join(a.tags, ",") + "]";
    if (std::none_of(report_.resources.begin(), report_.resources.end(), [&](const auto& r) { return r.id == id; }))
      report_.resources.push_back({id, a.kind, a.parties, a.tags});
    ps.active.push_back({id, a.tags, cut_name(a.parties)});
    for (auto& c : cands) c.ket = tensor(c.ket, res);
    visit(a.child, std::move(cands), std::move(ps));
  }

  void on_merge(const MergeParties& m, std::vector<Candidate> cands, PathState ps) {
    const std::string path = ps.path();
    if (cands.empty()) return;
    auto src = ps.principal.find(m.source), dst = ps.principal.find(m.destination);
    if (src == ps.principal.end() || dst == ps.principal.end() || m.source == m.destination) {
      fail(path, "merge", "merge needs two distinct current parties, got " + m.source + " -> " + m.destination);
      return;
    }
    const auto& space = cands.front().ket.space;
    const int src_dim = space.at(src->second).dim;
    if (m.dim < 2 || m.dim > src_dim) {
      fail(path, "merge", "declared dimension " + std::to_string(m.dim) + " outside [2, " + std::to_string(src_dim) + "]");
      return;
    }
    const std::vector<std::string> keep{src->second};
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(src_dim, src_dim);
    for (const auto& c : cands) rho += reduced_density(c.ket, keep);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
    int rank = 0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
      if (es.eigenvalues()(i) > opt_.tol) ++rank;
    if (rank > m.dim) {
      fail(path, "merge", "source support has rank " + std::to_string(rank) + " > declared dimension " +
                              std::to_string(m.dim));
      return;
    }
    pass(path, "merge", "support rank " + std::to_string(rank));
    const std::string merged = dst->second + src->second;
    for (auto& c : cands) c.ket = reassign_owner(merge_subsystems(c.ket, dst->second, src->second, merged), m.source, m.destination);
    const std::string id = "merge(" + m.source + "->" + m.destination + "," + std::to_string(m.dim) + ")";
    if (std::none_of(report_.merges.begin(), report_.merges.end(), [&](const auto& r) { return r.id == id; }))
      report_.merges.push_back({id, m.source, m.destination, m.dim});
    ps.merges.push_back(id);
    ps.merge_cuts.insert(cut_name({m.source, m.destination}));
    dst->second = merged;
    ps.principal.erase(src);
    visit(m.child, std::move(cands), std::move(ps));
  }

  void on_measure(const Measure& m, std::vector<Candidate> cands, PathState ps) {
    const std::string path = ps.path();
    if (cands.empty()) return;
    const auto& space = cands.front().ket.space;
    const auto owners = space.parties();
    if (std::find(owners.begin(), owners.end(), m.actor) == owners.end()) {
      fail(path, "actor", "'" + m.actor + "' is not a current party");
      return;
    }
    std::set<std::string> names;
    for (const auto& e : m.effects)
      if (!names.insert(e.name).second) {
        fail(path, "effects", "duplicate outcome '" + e.name + "'");
        return;
      }
    for (const auto& [k, v] : m.children)
      if (!names.count(k)) {
        fail(path, "effects", "child '" + k + "' has no effect");
        return;
      }
    std::vector<ProjectorExpr> exprs;
    for (const auto& e : m.effects) exprs.push_back(e.expr);
    EvaluatedEffects ev;
    try {
      ev = evaluate_effects(exprs, space);
    } catch (const std::invalid_argument& e) {
      fail(path, "effects", e.what());
      return;
    }
    bool ok = true;
    for (const auto& s : ev.acted.subsystems())
      if (s.label.owner != m.actor) {
        fail(path, "locality", m.actor + " acts on '" + s.label.tag + "' held by " + s.label.owner);
        ok = false;
      }
    const auto d = static_cast<Eigen::Index>(ev.acted.total_dim());
    Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t k = 0; k < ev.effects.size(); ++k) {
      total += ev.effects[k];
      if (!is_projector(ev.effects[k], opt_.tol)) {
        fail(path, "projector", "effect '" + m.effects[k].name + "' is not a projector");
        ok = false;
      }
    }
    if ((total - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() > opt_.tol) {
      fail(path, "completeness", "effects do not sum to the identity");
      ok = false;
    }
    if (!ok) return;
    pass(path, "locality");
    pass(path, "projector");
    pass(path, "completeness");

    std::vector<std::vector<Candidate>> outcomes(ev.effects.size());
    std::vector<double> total_p(cands.size(), 0.0);
    for (std::size_t k = 0; k < ev.effects.size(); ++k) {
      const Operator op{ev.acted, ev.effects[k]};
      for (std::size_t c = 0; c < cands.size(); ++c) {
        Ket t = apply_local(op, cands[c].ket);
        const double p = t.amplitudes.squaredNorm();
        total_p[c] += p;
        if (p <= opt_.tol) continue;
        t.amplitudes /= std::sqrt(p);
        outcomes[k].push_back({cands[c].state, std::move(t), cands[c].probability * p});
      }
    }
    for (std::size_t c = 0; c < cands.size(); ++c)
      if (std::abs(total_p[c] - 1.0) > opt_.tol)
        fail(path, "probability", "outcome probabilities of " + label(cands[c].state) + " sum to " + std::to_string(total_p[c]));

    std::vector<std::string> acted = nontrivial_tags(exprs, space);
    ps.mark_acted(std::set<std::string>(acted.begin(), acted.end()));

    for (std::size_t k = 0; k < ev.effects.size(); ++k) {
      const auto& name = m.effects[k].name;
      const auto& surv = outcomes[k];
      std::size_t bad = 0;
      std::string first;
      for (std::size_t i = 0; i < surv.size(); ++i)
        for (std::size_t j = i + 1; j < surv.size(); ++j) {
          const double ov = std::abs(inner(surv[i].ket, surv[j].ket));
          if (ov > opt_.ortho_tol) {
            if (!bad++) {
              std::ostringstream os;
              os << label(surv[i].state) << " and " << label(surv[j].state) << " overlap " << ov;
              first = os.str();
            }
          }
        }
      const std::string check = "orthogonality[" + name + "]";
      if (bad) fail(path, check, first + (bad > 1 ? " (" + std::to_string(bad) + " pairs)" : ""));
      else pass(path, check, std::to_string(surv.size()) + " survivors");

      auto child = m.children.find(name);
      if (child == m.children.end()) {
        if (!surv.empty()) fail(path, "structure", "outcome '" + name + "' has survivors but no continuation");
        continue;
      }
      PathState next = ps;
      next.steps.push_back(m.actor + ":" + name);
      visit(child->second, surv, std::move(next));
    }
  }

  std::string label(std::size_t i) const { return b_.states()[i].label; }

  std::vector<std::string> survivor_labels(const std::vector<Candidate>& cands) const {
    std::vector<std::string> out;
    for (const auto& c : cands) out.push_back(label(c.state));
    return out;
  }

  void record_branch(const std::vector<Candidate>& cands, const PathState& ps, bool success) {
    BranchRecord br;
    br.path = ps.path();
    for (const auto& c : cands) br.weights.emplace_back(label(c.state), c.probability);
    for (const auto& r : ps.active) {
      if (ps.consumed.count(r.id)) {
        br.consumed.push_back(r.id);
        br.cuts.insert(r.cut);
      } else {
        br.returned.push_back(r.id);
      }
    }
    br.merges = ps.merges;
    br.cuts.insert(ps.merge_cuts.begin(), ps.merge_cuts.end());
    br.success = success;
    if (success)
      for (const auto& c : cands) ident_[c.state] += c.probability;
    report_.branches.push_back(std::move(br));
  }

  void on_identify(const Identify& l, const std::vector<Candidate>& cands, const PathState& ps) {
    LeafRecord rec{ps.path(), "identify", {l.label}, survivor_labels(cands), true, {}};
    if (!cands.empty()) {
      rec.passed = cands.size() == 1 && rec.survivors.front() == l.label;
      if (!rec.passed) fail(rec.path, "leaf", "identify " + l.label + " reached by {" + join(rec.survivors, ", ") + "}");
      record_branch(cands, ps, rec.passed);
    }
    report_.leaves.push_back(std::move(rec));
  }

  void on_set(const DistinguishableSet& l, const std::vector<Candidate>& cands, PathState ps) {
    LeafRecord rec{ps.path(), "distinguishable", l.labels, survivor_labels(cands), true, {}};
    if (!cands.empty()) {
      auto want = l.labels, got = rec.survivors;
      std::sort(want.begin(), want.end());
      std::sort(got.begin(), got.end());
      if (want != got) {
        rec.passed = false;
        fail(rec.path, "leaf", "declared {" + join(l.labels, ", ") + "} but reached by {" + join(rec.survivors, ", ") + "}");
      }
      std::vector<LabeledKet> states;
      for (const auto& c : cands) states.push_back({label(c.state), c.ket});
      auto strat = leaf_verify(states, opt_.tol);
      if (!strat) {
        rec.passed = false;
        fail(rec.path, "leaf", "no local strategy found for {" + join(rec.survivors, ", ") + "}");
      } else {
        rec.strategy = strategy_to_text(strat->root);
        ps.mark_acted(strat->acted_tags);
      }
      record_branch(cands, ps, rec.passed);
    }
    report_.leaves.push_back(std::move(rec));
  }

  void on_fail(const std::vector<Candidate>& cands, const PathState& ps) {
    LeafRecord rec{ps.path(), "fail", {}, survivor_labels(cands), cands.empty(), {}};
    if (!cands.empty()) {
      fail(rec.path, "leaf", "fail leaf reached by {" + join(rec.survivors, ", ") + "}");
      record_branch(cands, ps, false);
    }
    report_.leaves.push_back(std::move(rec));
  }

  ResourceLedger build_ledger() const {
    ResourceLedger l;
    for (const auto& p : b_.parties()) l.local_dim = std::max(l.local_dim, p.dim);
    l.baseline_ebits = l.local_dim > 0 ? 2.0 * std::log2(static_cast<double>(l.local_dim)) : 0.0;
    const double prior = b_.size() ? 1.0 / static_cast<double>(b_.size()) : 0.0;

    auto entry_for = [&](const std::string& kind, const std::vector<std::string>& ends, double unit, bool counts,
                         bool via_merge) -> LedgerEntry& {
      for (auto& e : l.entries)
        if (e.kind == kind && e.endpoints == ends && e.via_merge == via_merge) return e;
      l.entries.push_back({kind, ends, 0.0, unit, counts, via_merge});
      return l.entries.back();
    };
    for (const auto& r : report_.resources)
      entry_for(std::string(resource_name(r.kind)), r.parties, resource_cut_ebits(r.kind),
                resource_counts_as_ebits(r.kind), false);
    for (const auto& m : report_.merges)
      entry_for("teleport", {m.source, m.destination}, std::log2(static_cast<double>(m.dim)), true, true);

    for (const auto& br : report_.branches) {
      double w = 0.0;
      for (const auto& [lab, p] : br.weights) w += prior * p;
      for (const auto& id : br.consumed) {
        const auto& r = *std::find_if(report_.resources.begin(), report_.resources.end(),
                                      [&](const auto& x) { return x.id == id; });
        entry_for(std::string(resource_name(r.kind)), r.parties, 0, false, false).expected += w;
      }
      for (const auto& id : br.merges) {
        const auto& m = *std::find_if(report_.merges.begin(), report_.merges.end(),
                                      [&](const auto& x) { return x.id == id; });
        entry_for("teleport", {m.source, m.destination}, 0, true, true).expected += w;
      }
    }
    for (const auto& e : l.entries) {
      if (e.counts_as_ebits) l.total_ebits += e.expected * e.unit_ebits;
      if (e.kind == "GHZ") l.ghz_expected += e.expected;
      if (e.kind == "W") l.w_expected += e.expected;
    }
    l.ghz_bound_ebits = 2.0 * l.ghz_expected;
    return l;
  }

  const OrthoProductBasis& b_;
  VerifyOptions opt_;
  std::vector<double> ident_;
  VerificationReport report_;
};

}  // namespace

double ResourceLedger::expected(std::string_view kind, const std::vector<std::string>& endpoints) const {
  double s = 0.0;
  for (const auto& e : entries)
    if (e.kind == kind && e.endpoints == endpoints) s += e.expected;
  return s;
}

VerificationReport verify_protocol(const NodePtr& root, const OrthoProductBasis& b, const VerifyOptions& opt) {
  return Runner(b, opt).run(root);
}

ResourceLedger resource_accounting(const NodePtr& root, const OrthoProductBasis& b, const VerifyOptions& opt) {
  auto r = verify_protocol(root, b, opt);
  if (!r.passed)
    throw VerificationFailed("protocol does not verify against " + b.name() + ": " +
                             (r.failures.empty() ? std::string("unknown failure") : r.failures.front()));
  return r.ledger;
}

NodePtr complete_by_symmetry(const NodePtr& partial, const OrthoProductBasis& b, const VerifyOptions& opt) {
  NodePtr full;
  try {
    full = expand_mirrors(partial);
  } catch (const std::invalid_argument& e) {
    throw VerificationFailed(std::string("symmetric completion: ") + e.what());
  }
  auto r = verify_protocol(full, b, opt);
  if (!r.passed)
    throw VerificationFailed("symmetric completion rejected at " +
                             (r.failures.empty() ? std::string("(unknown)") : r.failures.front()));
  return full;
}

}  // namespace gnpb
