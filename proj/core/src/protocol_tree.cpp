#include "gnpb/protocol_tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gnpb {

namespace {

template <class T>
NodePtr wrap(T body) {
  return std::make_shared<const ProtocolNode>(ProtocolNode{std::move(body)});
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_permutation(const std::string& tag, const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  for (int v : perm) {
    if (v < 0 || static_cast<std::size_t>(v) >= perm.size() || seen[static_cast<std::size_t>(v)])
      throw std::invalid_argument("symmetry on '" + tag + "' is not a permutation");
    seen[static_cast<std::size_t>(v)] = true;
  }
}

int apply_perm(const std::vector<int>& perm, int k) {
  if (k < 0 || static_cast<std::size_t>(k) >= perm.size())
    throw std::invalid_argument("symmetry does not cover level " + std::to_string(k));
  return perm[static_cast<std::size_t>(k)];
}

ProjectorExpr conjugate_expr(const ProjectorExpr& e, const Symmetry& sym) {
  ProjectorExpr out = e;
  for (auto& t : out.terms)
    for (auto& f : t.factors) {
      auto it = sym.permutations.find(f.label);
      if (it == sym.permutations.end() || f.identity) continue;
      for (auto& k : f.kets) {
        k.first = apply_perm(it->second, k.first);
        if (k.twisted()) {
          k.second = apply_perm(it->second, k.second);
          // (|j⟩ ± |i⟩) spans the same ray as (|i⟩ ± |j⟩).
          if (k.first > k.second) std::swap(k.first, k.second);
        }
      }
    }
  return out;
}

bool equal_expr(const ProjectorExpr& a, const ProjectorExpr& b) { return a == b; }

}  // namespace

double MergeParties::cost() const { return std::log2(static_cast<double>(dim)); }

NodePtr measure(std::string actor, std::vector<Effect> effects, std::map<std::string, NodePtr> children) {
  return wrap(Measure{std::move(actor), std::move(effects), std::move(children)});
}

NodePtr attach(ResourceKind kind, std::vector<std::string> parties, std::vector<std::string> tags, NodePtr child) {
  return wrap(AttachResource{kind, std::move(parties), std::move(tags), std::move(child)});
}

NodePtr merge(std::string source, std::string destination, int dim, NodePtr child) {
  return wrap(MergeParties{std::move(source), std::move(destination), dim, std::move(child)});
}

NodePtr identify(std::string label) { return wrap(Identify{std::move(label)}); }
NodePtr distinguishable(std::vector<std::string> labels) { return wrap(DistinguishableSet{std::move(labels)}); }
NodePtr fail() { return wrap(Fail{}); }
NodePtr mirror(std::string source, Symmetry symmetry) { return wrap(Mirror{std::move(source), std::move(symmetry)}); }

Symmetry swap01(std::initializer_list<std::string> tags) {
  Symmetry s;
  for (const auto& t : tags) s.permutations[t] = {1, 0};
  return s;
}

bool structurally_equal(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return !a && !b;
  if (a->body.index() != b->body.index()) return false;
  return std::visit(
      Overloaded{
          [&](const Measure& x) {
            const auto& y = std::get<Measure>(b->body);
            if (x.actor != y.actor || x.effects.size() != y.effects.size() || x.children.size() != y.children.size())
              return false;
            for (std::size_t i = 0; i < x.effects.size(); ++i)
              if (x.effects[i].name != y.effects[i].name || !equal_expr(x.effects[i].expr, y.effects[i].expr))
                return false;
            for (const auto& [k, v] : x.children) {
              auto it = y.children.find(k);
              if (it == y.children.end() || !structurally_equal(v, it->second)) return false;
            }
            return true;
          },
          [&](const AttachResource& x) {
            const auto& y = std::get<AttachResource>(b->body);
            return x.kind == y.kind && x.parties == y.parties && x.tags == y.tags &&
                   structurally_equal(x.child, y.child);
          },
          [&](const MergeParties& x) {
            const auto& y = std::get<MergeParties>(b->body);
            return x.source == y.source && x.destination == y.destination && x.dim == y.dim &&
                   structurally_equal(x.child, y.child);
          },
          [&](const Identify& x) { return x.label == std::get<Identify>(b->body).label; },
          [&](const DistinguishableSet& x) { return x.labels == std::get<DistinguishableSet>(b->body).labels; },
          [&](const Fail&) { return true; },
          [&](const Mirror& x) {
            const auto& y = std::get<Mirror>(b->body);
            return x.source == y.source && x.symmetry == y.symmetry;
          },
      },
      a->body);
}

NodePtr conjugate(const NodePtr& node, const Symmetry& sym) {
  for (const auto& [tag, perm] : sym.permutations) check_permutation(tag, perm);
  if (!node) return node;
  return std::visit(
      Overloaded{
          [&](const Measure& m) -> NodePtr {
            Measure out{m.actor, {}, {}};
            for (const auto& e : m.effects) out.effects.push_back({e.name, conjugate_expr(e.expr, sym)});
            for (const auto& [k, v] : m.children) out.children[k] = conjugate(v, sym);
            return wrap(std::move(out));
          },
          [&](const AttachResource& a) -> NodePtr {
            auto out = a;
            out.child = conjugate(a.child, sym);
            return wrap(std::move(out));
          },
          [&](const MergeParties& a) -> NodePtr {
            auto out = a;
            out.child = conjugate(a.child, sym);
            return wrap(std::move(out));
          },
          [&](const auto&) -> NodePtr { return node; },
      },
      node->body);
}

NodePtr expand_mirrors(const NodePtr& node) {
  if (!node) return node;
  return std::visit(
      Overloaded{
          [&](const Measure& m) -> NodePtr {
            Measure out{m.actor, m.effects, {}};
            for (const auto& [k, v] : m.children)
              if (!std::holds_alternative<Mirror>(v->body)) out.children[k] = expand_mirrors(v);
            for (const auto& [k, v] : m.children) {
              const auto* mr = std::get_if<Mirror>(&v->body);
              if (!mr) continue;
              auto src = out.children.find(mr->source);
              if (src == out.children.end())
                throw std::invalid_argument("mirror of outcome '" + k + "' names missing source '" + mr->source + "'");
              out.children[k] = conjugate(src->second, mr->symmetry);
            }
            return wrap(std::move(out));
          },
          [&](const AttachResource& a) -> NodePtr {
            auto out = a;
            out.child = expand_mirrors(a.child);
            return wrap(std::move(out));
          },
          [&](const MergeParties& a) -> NodePtr {
            auto out = a;
            out.child = expand_mirrors(a.child);
            return wrap(std::move(out));
          },
          [&](const Mirror&) -> NodePtr { throw std::invalid_argument("mirror node outside a measurement"); },
          [&](const auto&) -> NodePtr { return node; },
      },
      node->body);
}

bool contains_mirror(const NodePtr& node) {
  if (!node) return false;
  return std::visit(Overloaded{
                        [](const Measure& m) {
                          return std::any_of(m.children.begin(), m.children.end(),
                                             [](const auto& kv) { return contains_mirror(kv.second); });
                        },
                        [](const AttachResource& a) { return contains_mirror(a.child); },
                        [](const MergeParties& a) { return contains_mirror(a.child); },
                        [](const Mirror&) { return true; },
                        [](const auto&) { return false; },
                    },
                    node->body);
}

std::size_t node_count(const NodePtr& node) {
  if (!node) return 0;
  return 1 + std::visit(Overloaded{
                            [](const Measure& m) {
                              std::size_t n = 0;
                              for (const auto& [k, v] : m.children) n += node_count(v);
                              return n;
                            },
                            [](const AttachResource& a) { return node_count(a.child); },
                            [](const MergeParties& a) { return node_count(a.child); },
                            [](const auto&) { return std::size_t{0}; },
                        },
                        node->body);
}

}  // namespace gnpb
