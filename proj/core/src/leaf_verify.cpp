#include "gnpb/leaf_verify.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace gnpb {

namespace {

struct Search {
  double tol;
  std::set<std::string> acted;
};

std::vector<std::string> labels_of(const std::vector<LabeledKet>& s) {
  std::vector<std::string> out;
  for (const auto& x : s) out.push_back(x.label);
  return out;
}

bool pairwise_orthogonal(const std::vector<LabeledKet>& s) {
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j)
      if (std::abs(inner(s[i].ket, s[j].ket)) > kOrthoTol) return false;
  return true;
}

// Orthonormal basis of the support of a density matrix.
Eigen::MatrixXcd support(const Eigen::MatrixXcd& rho, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    if (es.eigenvalues()(i) > tol) keep.push_back(i);
  Eigen::MatrixXcd out(rho.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  return out;
}

std::optional<StrategyNode> solve(const std::vector<LabeledKet>& states, Search& s);

// Subsets of 1..3 subsystems, smallest first, in lexicographic order.
std::vector<std::vector<std::string>> small_subsets(const std::vector<std::string>& tags) {
  std::vector<std::vector<std::string>> out;
  const std::size_t n = tags.size();
  for (std::size_t i = 0; i < n; ++i) out.push_back({tags[i]});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back({tags[i], tags[j]});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) out.push_back({tags[i], tags[j], tags[k]});
  return out;
}

std::optional<StrategyNode> try_detach(const std::vector<LabeledKet>& states, Search& s) {
  const auto tags = states.front().ket.space.tags();
  if (tags.size() < 2) return std::nullopt;
  for (const auto& sub : small_subsets(tags)) {
    if (sub.size() == tags.size()) continue;
    const Eigen::MatrixXcd r0 = reduced_density(states.front().ket, sub);
    if (std::abs((r0 * r0).trace().real() - 1.0) > s.tol) continue;
    bool common = true;
    for (std::size_t i = 1; i < states.size() && common; ++i)
      common = (reduced_density(states[i].ket, sub) - r0).cwiseAbs().maxCoeff() < s.tol;
    if (!common) continue;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(r0);
    const Eigen::VectorXcd chi = es.eigenvectors().col(es.eigenvalues().size() - 1);
    std::vector<LabeledKet> rest;
    for (const auto& x : states) rest.push_back({x.label, contract(x.ket, sub, chi)});
    auto child = solve(rest, s);
    if (!child) return std::nullopt;
    StrategyNode n;
    n.kind = StrategyNode::Kind::Detach;
    n.tags = sub;
    n.labels = labels_of(states);
    n.children.push_back(std::move(*child));
    return n;
  }
  return std::nullopt;
}

std::optional<StrategyNode> try_split(const std::vector<LabeledKet>& states, const std::string& party, Search& s) {
  const auto tags = states.front().ket.space.tags_of(party);
  const std::size_t m = states.size();
  std::vector<Eigen::MatrixXcd> sup;
  for (const auto& x : states) sup.push_back(support(reduced_density(x.ket, tags), s.tol));
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      if ((sup[i].adjoint() * sup[j]).norm() > 1e-7) parent[find(i)] = find(j);
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::size_t> root_of(m, m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = find(i);
    if (root_of[r] == m) {
      root_of[r] = blocks.size();
      blocks.emplace_back();
    }
    blocks[root_of[r]].push_back(i);
  }
  if (blocks.size() < 2) return std::nullopt;
  StrategyNode n;
  n.kind = StrategyNode::Kind::Split;
  n.party = party;
  n.labels = labels_of(states);
  for (const auto& blk : blocks) {
    std::vector<LabeledKet> sub;
    for (auto i : blk) sub.push_back(states[i]);
    auto child = solve(sub, s);
    if (!child) return std::nullopt;
    n.children.push_back(std::move(*child));
  }
  for (const auto& t : tags) s.acted.insert(t);
  return n;
}

struct LocalBasis {
  std::string name;
  Eigen::MatrixXcd vectors;
};

std::vector<LocalBasis> candidate_bases(const std::vector<LabeledKet>& states, const std::vector<std::string>& tags,
                                        double tol) {
  const auto d = static_cast<Eigen::Index>(states.front().ket.space.dim_of(tags));
  std::vector<LocalBasis> out{{"computational", Eigen::MatrixXcd::Identity(d, d)}};
  std::vector<std::pair<Eigen::Index, Eigen::Index>> pairs;
  for (const auto& x : states) {
    const Eigen::MatrixXcd rho = reduced_density(x.ket, tags);
    if (std::abs((rho * rho).trace().real() - 1.0) < tol) continue;
    std::vector<Eigen::Index> on;
    for (Eigen::Index k = 0; k < d; ++k)
      if (rho(k, k).real() > tol) on.push_back(k);
    if (on.size() == 2 && std::find(pairs.begin(), pairs.end(), std::pair{on[0], on[1]}) == pairs.end())
      pairs.emplace_back(on[0], on[1]);
  }
  if (pairs.empty()) return out;
  std::vector<bool> used(static_cast<std::size_t>(d), false);
  std::vector<Eigen::VectorXcd> cols;
  std::string name = "paired";
  const double h = 1.0 / std::sqrt(2.0);
  for (const auto& [x, y] : pairs) {
    if (used[static_cast<std::size_t>(x)] || used[static_cast<std::size_t>(y)]) continue;
    used[static_cast<std::size_t>(x)] = used[static_cast<std::size_t>(y)] = true;
    for (int sign : {1, -1}) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(d);
      v(x) = h;
      v(y) = sign * h;
      cols.push_back(v);
    }
    name += " (" + std::to_string(x) + "±" + std::to_string(y) + ")";
  }
  for (Eigen::Index k = 0; k < d; ++k)
    if (!used[static_cast<std::size_t>(k)]) cols.push_back(Eigen::VectorXcd::Unit(d, k));
  Eigen::MatrixXcd b(d, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = cols[k];
  out.push_back({name, b});
  return out;
}

std::optional<StrategyNode> try_measure(const std::vector<LabeledKet>& states, const std::string& party, Search& s) {
  const auto tags = states.front().ket.space.tags_of(party);
  for (const auto& basis : candidate_bases(states, tags, s.tol)) {
    std::vector<std::vector<LabeledKet>> outcomes;
    bool ok = true;
    for (Eigen::Index c = 0; c < basis.vectors.cols() && ok; ++c) {
      std::vector<LabeledKet> cond;
      for (const auto& x : states) {
        Ket k = contract(x.ket, tags, basis.vectors.col(c));
        const double q = k.amplitudes.squaredNorm();
        if (q <= s.tol) continue;
        k.amplitudes /= std::sqrt(q);
        cond.push_back({x.label, std::move(k)});
      }
      ok = pairwise_orthogonal(cond);
      if (!cond.empty()) outcomes.push_back(std::move(cond));
    }
    if (!ok) continue;
    StrategyNode n;
    n.kind = StrategyNode::Kind::Measure;
    n.party = party;
    n.basis = basis.name;
    n.labels = labels_of(states);
    Search trial{s.tol, s.acted};
    bool good = true;
    for (const auto& cond : outcomes) {
      auto child = solve(cond, trial);
      if (!child) {
        good = false;
        break;
      }
      n.children.push_back(std::move(*child));
    }
    if (!good) continue;
    s.acted = std::move(trial.acted);
    for (const auto& t : tags) s.acted.insert(t);
    return n;
  }
  return std::nullopt;
}

std::optional<StrategyNode> solve(const std::vector<LabeledKet>& states, Search& s) {
  if (states.size() <= 1) {
    StrategyNode n;
    n.labels = labels_of(states);
    return n;
  }
  if (auto n = try_detach(states, s)) return n;
  const auto parties = states.front().ket.space.parties();
  if (parties.size() <= 1) {
    // Orthogonal states held by one party are told apart by a local measurement.
    StrategyNode n;
    n.kind = StrategyNode::Kind::SingleParty;
    n.party = parties.empty() ? "" : parties.front();
    n.labels = labels_of(states);
    for (const auto& t : states.front().ket.space.tags()) s.acted.insert(t);
    return n;
  }
  for (const auto& p : parties) {
    Search trial{s.tol, s.acted};
    if (auto n = try_split(states, p, trial)) {
      s.acted = std::move(trial.acted);
      return n;
    }
  }
  for (const auto& p : parties) {
    Search trial{s.tol, s.acted};
    if (auto n = try_measure(states, p, trial)) {
      s.acted = std::move(trial.acted);
      return n;
    }
  }
  return std::nullopt;
}

void join(std::ostringstream& os, const std::vector<std::string>& xs) {
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? " " : "") << xs[i];
}

}  // namespace

std::optional<LeafStrategy> leaf_verify(const std::vector<LabeledKet>& states, double tol) {
  LeafStrategy out;
  if (states.size() > 1) {
    for (const auto& x : states)
      if (!(x.ket.space == states.front().ket.space)) return std::nullopt;
    if (!pairwise_orthogonal(states)) return std::nullopt;
  }
  Search s{tol, {}};
  auto root = solve(states, s);
  if (!root) return std::nullopt;
  out.root = std::move(*root);
  out.acted_tags = std::move(s.acted);
  return out;
}

std::string strategy_to_text(const StrategyNode& node, int indent) {
  std::ostringstream os;
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  os << pad;
  switch (node.kind) {
    case StrategyNode::Kind::Done:
      os << "identified ";
      join(os, node.labels);
      break;
    case StrategyNode::Kind::SingleParty:
      os << node.party << " holds every remaining subsystem and measures {";
      join(os, node.labels);
      os << "}";
      break;
    case StrategyNode::Kind::Detach:
      os << "drop common factor on ";
      join(os, node.tags);
      break;
    case StrategyNode::Kind::Split:
      os << node.party << " projects onto " << node.children.size() << " orthogonal support blocks";
      break;
    case StrategyNode::Kind::Measure:
      os << node.party << " measures the " << node.basis << " basis";
      break;
  }
  os << '\n';
  for (const auto& c : node.children) os << strategy_to_text(c, indent + 2);
  return os.str();
}

}  // namespace gnpb
