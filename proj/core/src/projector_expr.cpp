#include "gnpb/projector_expr.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gnpb {

Eigen::VectorXcd ket_vector(const KetSpec& k, int dim) {
  auto check = [dim](int i) {
    if (i < 0 || i >= dim)
      throw std::invalid_argument("ket index " + std::to_string(i) + " out of range for dimension " + std::to_string(dim));
  };
  check(k.first);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  if (!k.twisted()) {
    v(k.first) = 1.0;
    return v;
  }
  check(k.second);
  if (k.first == k.second) throw std::invalid_argument("twisted ket needs two distinct levels");
  const double s = 1.0 / std::sqrt(2.0);
  v(k.first) = s;
  v(k.second) = k.sign >= 0 ? s : -s;
  return v;
}

Eigen::MatrixXcd ketlist_projector(const KetList& k, int dim) {
  if (k.identity) return Eigen::MatrixXcd::Identity(dim, dim);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& spec : k.kets) {
    const auto v = ket_vector(spec, dim);
    p += v * v.adjoint();
  }
  return p;
}

namespace {

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CompositeSpace acted_space(std::span<const ProjectorExpr> exprs, const CompositeSpace& space) {
  std::vector<bool> used(space.size(), false);
  for (const auto& e : exprs)
    for (const auto& t : e.terms)
      for (const auto& f : t.factors) {
        auto p = space.find(f.label);
        if (!p) throw std::invalid_argument("unknown subsystem '" + f.label + "'");
        used[*p] = true;
      }
  std::vector<Subsystem> subs;
  for (std::size_t i = 0; i < space.size(); ++i)
    if (used[i]) subs.push_back(space.subsystems()[i]);
  return CompositeSpace(std::move(subs));
}

}  // namespace

EvaluatedEffects evaluate_effects(std::span<const ProjectorExpr> exprs, const CompositeSpace& space) {
  EvaluatedEffects out;
  out.acted = acted_space(exprs, space);
  const auto d = static_cast<Eigen::Index>(out.acted.total_dim());
  const auto& subs = out.acted.subsystems();
  Eigen::MatrixXcd total = Eigen::MatrixXcd::Zero(d, d);
  std::ptrdiff_t rest_at = -1;
  for (std::size_t e = 0; e < exprs.size(); ++e) {
    if (exprs[e].rest) {
      if (rest_at >= 0) throw std::invalid_argument("more than one rest effect");
      rest_at = static_cast<std::ptrdiff_t>(e);
      out.effects.emplace_back();
      continue;
    }
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& term : exprs[e].terms) {
      for (std::size_t a = 0; a < term.factors.size(); ++a)
        for (std::size_t b = a + 1; b < term.factors.size(); ++b)
          if (term.factors[a].label == term.factors[b].label)
            throw std::invalid_argument("subsystem '" + term.factors[a].label + "' repeated in one term");
      Eigen::MatrixXcd t = Eigen::MatrixXcd::Ones(1, 1);
      for (const auto& s : subs) {
        auto it = std::find_if(term.factors.begin(), term.factors.end(),
                               [&](const KetList& k) { return k.label == s.label.tag; });
        t = kron(t, it == term.factors.end() ? Eigen::MatrixXcd::Identity(s.dim, s.dim) : ketlist_projector(*it, s.dim));
      }
      m += t;
    }
    total += m;
    out.effects.push_back(std::move(m));
  }
  if (rest_at >= 0) out.effects[static_cast<std::size_t>(rest_at)] = Eigen::MatrixXcd::Identity(d, d) - total;
  return out;
}

std::vector<std::string> nontrivial_tags(std::span<const ProjectorExpr> exprs, const CompositeSpace& space) {
  std::vector<std::string> out;
  for (const auto& s : space.subsystems()) {
    bool acted = false;
    for (const auto& e : exprs)
      for (const auto& t : e.terms)
        for (const auto& f : t.factors)
          if (f.label == s.label.tag && !f.identity &&
              !ketlist_projector(f, s.dim).isApprox(Eigen::MatrixXcd::Identity(s.dim, s.dim), 1e-12))
            acted = true;
    if (acted) out.push_back(s.label.tag);
  }
  return out;
}

KetList on(std::string label, std::initializer_list<int> kets) {
  KetList k{std::move(label), false, {}};
  for (int i : kets) k.kets.push_back(ket(i));
  return k;
}

KetList on(std::string label, std::vector<KetSpec> kets) { return KetList{std::move(label), false, std::move(kets)}; }

KetList id(std::string label) { return KetList{std::move(label), true, {}}; }

ProjectorTerm P(std::initializer_list<KetList> factors) { return ProjectorTerm{factors}; }

ProjectorExpr sum(std::initializer_list<ProjectorTerm> terms) { return ProjectorExpr{false, terms}; }

ProjectorExpr rest() { return ProjectorExpr{true, {}}; }

}  // namespace gnpb
