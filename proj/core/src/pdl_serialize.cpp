#include <sstream>

#include "gnpb/pdl.hpp"

namespace gnpb {

namespace {

std::string ket_text(const KetSpec& k) {
  if (!k.twisted()) return std::to_string(k.first);
  return "(" + std::to_string(k.first) + (k.sign < 0 ? "-" : "+") + std::to_string(k.second) + ")/sqrt2";
}

std::string expr_text(const ProjectorExpr& e) {
  if (e.rest) return "rest";
  std::string out;
  for (std::size_t t = 0; t < e.terms.size(); ++t) {
    if (t) out += " + ";
    out += "P[";
    const auto& fs = e.terms[t].factors;
    for (std::size_t f = 0; f < fs.size(); ++f) {
      if (f) out += ", ";
      out += fs[f].label + ":";
      if (fs[f].identity) {
        out += "I";
        continue;
      }
      out += "{";
      for (std::size_t k = 0; k < fs[f].kets.size(); ++k) out += (k ? "," : "") + ket_text(fs[f].kets[k]);
      out += "}";
    }
    out += "]";
  }
  return out;
}

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

struct Writer {
  std::ostringstream os;

  void line(int depth, const std::string& s) { os << std::string(2 * depth, ' ') << s << '\n'; }

  // `lead` is what precedes the node on its first line ("" or "K1 -> ").
  void node(const NodePtr& n, int depth, const std::string& lead) {
    std::visit(
        [&](const auto& b) {
          using T = std::decay_t<decltype(b)>;
          if constexpr (std::is_same_v<T, Measure>) {
            line(depth, lead + "measure by " + b.actor + " {");
            for (const auto& e : b.effects) line(depth + 1, e.name + " = " + expr_text(e.expr));
            line(depth, "} outcomes {");
            for (const auto& [name, child] : b.children) node(child, depth + 1, name + " -> ");
            line(depth, "}");
          } else if constexpr (std::is_same_v<T, AttachResource>) {
            line(depth, lead + "attach " + std::string(resource_name(b.kind)) + "(" + join(b.parties, ",") + ") as " +
                            join(b.tags, " "));
            node(b.child, depth, "");
          } else if constexpr (std::is_same_v<T, MergeParties>) {
            line(depth, lead + "merge " + b.source + " into " + b.destination + " dim " + std::to_string(b.dim));
            node(b.child, depth, "");
          } else if constexpr (std::is_same_v<T, Identify>) {
            line(depth, lead + "identify " + b.label);
          } else if constexpr (std::is_same_v<T, DistinguishableSet>) {
            line(depth, lead + "distinguishable {");
            for (const auto& l : b.labels) line(depth + 1, l);
            line(depth, "}");
          } else if constexpr (std::is_same_v<T, Fail>) {
            line(depth, lead + "fail");
          } else {
            std::string s = lead + "mirror " + b.source + " under {";
            for (const auto& [tag, perm] : b.symmetry.permutations) {
              s += " " + tag + ":[";
              for (std::size_t i = 0; i < perm.size(); ++i) s += (i ? "," : "") + std::to_string(perm[i]);
              s += "]";
            }
            line(depth, s + " }");
          }
        },
        n->body);
  }
};

}  // namespace

std::string serialize_pdl(const NamedProtocol& p) {
  Writer w;
  if (!p.name.empty()) w.line(0, "protocol " + p.name);
  std::string parties = "parties {";
  for (const auto& s : p.parties) parties += " " + s.name + ":" + std::to_string(s.dim);
  w.line(0, parties + " }");
  w.line(0, "basis " + p.basis);
  if (p.upper_bound) w.line(0, "upper_bound");
  for (const auto& r : p.resources)
    w.line(0, "resource " + std::string(resource_name(r.kind)) + "(" + join(r.parties, ",") + ") as " +
                  join(r.tags, " "));
  w.os << '\n';
  w.node(p.partial, 0, "");
  return w.os.str();
}

bool protocols_equal(const NamedProtocol& a, const NamedProtocol& b) {
  if (a.name != b.name || a.basis != b.basis || a.upper_bound != b.upper_bound || a.resources != b.resources)
    return false;
  if (a.parties.size() != b.parties.size()) return false;
  for (std::size_t i = 0; i < a.parties.size(); ++i)
    if (a.parties[i].name != b.parties[i].name || a.parties[i].dim != b.parties[i].dim) return false;
  return structurally_equal(a.partial, b.partial) && structurally_equal(a.root, b.root);
}

}  // namespace gnpb
