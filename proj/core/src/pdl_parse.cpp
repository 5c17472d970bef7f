#include <algorithm>
#include <cctype>
#include <set>

#include "gnpb/pdl.hpp"

namespace gnpb {

ParseError::ParseError(SourcePos p, const std::string& msg)
    : std::runtime_error(std::to_string(p.line) + ":" + std::to_string(p.column) + ": " + msg), pos(p), message(msg) {}

namespace {

constexpr int kMaxDepth = 256;

struct Subsys {
  std::string owner;
  int dim = 0;
};

// What is addressable at a given point of the tree.
struct Scope {
  std::map<std::string, std::string> principal;  // party -> register tag
  std::map<std::string, Subsys> subsystems;       // tag -> owner, dim
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\''; }

class Parser {
 public:
  explicit Parser(std::string_view text) : src_(text) {}

  PdlDocument run() {
    header();
    skip();
    if (at_end()) fail(here(), "expected protocol body after header");
    const SourcePos body = here();
    auto partial = node(root_scope_, 0);
    skip();
    if (!at_end()) fail(here(), "unexpected trailing input");
    doc_.protocol.partial = partial;
    try {
      doc_.protocol.root = expand_mirrors(partial);
    } catch (const std::invalid_argument& e) {
      fail(body, e.what());
    }
    return std::move(doc_);
  }

 private:
  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1, col_ = 1;
  PdlDocument doc_;
  Scope root_scope_;

  [[noreturn]] void fail(SourcePos p, const std::string& msg) { throw ParseError(p, msg); }

  bool at_end() const { return i_ >= src_.size(); }
  char cur() const { return at_end() ? '\0' : src_[i_]; }
  SourcePos here() const { return {line_, col_}; }

  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip() {
    while (!at_end()) {
      if (std::isspace(static_cast<unsigned char>(cur()))) {
        advance();
      } else if (cur() == '#') {
        while (!at_end() && cur() != '\n') advance();
      } else {
        break;
      }
    }
  }

  std::string describe_next() {
    if (at_end()) return "end of input";
    return "'" + std::string(1, cur()) + "'";
  }

  bool peek_ident(std::string_view word) {
    skip();
    if (src_.substr(i_, word.size()) != word) return false;
    const std::size_t end = i_ + word.size();
    return end >= src_.size() || !ident_char(src_[end]);
  }

  std::string ident(const char* what) {
    skip();
    if (!ident_start(cur())) fail(here(), std::string("expected ") + what + ", found " + describe_next());
    std::string out;
    while (!at_end() && ident_char(cur())) {
      out += cur();
      advance();
    }
    return out;
  }

  void keyword(std::string_view word) {
    skip();
    const SourcePos p = here();
    if (!peek_ident(word)) fail(p, "expected '" + std::string(word) + "', found " + describe_next());
    for (std::size_t k = 0; k < word.size(); ++k) advance();
  }

  bool try_keyword(std::string_view word) {
    if (!peek_ident(word)) return false;
    keyword(word);
    return true;
  }

  void punct(char c) {
    skip();
    if (cur() != c) fail(here(), std::string("expected '") + c + "', found " + describe_next());
    advance();
  }

  bool try_punct(char c) {
    skip();
    if (cur() != c) return false;
    advance();
    return true;
  }

  int integer(const char* what) {
    skip();
    const SourcePos p = here();
    if (!std::isdigit(static_cast<unsigned char>(cur()))) fail(p, std::string("expected ") + what + ", found " + describe_next());
    long long v = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(cur()))) {
      v = v * 10 + (cur() - '0');
      if (v > 1'000'000) fail(p, "integer out of range");
      advance();
    }
    return static_cast<int>(v);
  }

  // Leaf labels: any run of non-space characters other than braces and '#'.
  std::string label() {
    skip();
    std::string out;
    while (!at_end() && !std::isspace(static_cast<unsigned char>(cur())) && cur() != '{' && cur() != '}' &&
           cur() != '#') {
      out += cur();
      advance();
    }
    if (out.empty()) fail(here(), "expected state label, found " + describe_next());
    return out;
  }

  ResourceKind resource_kind() {
    skip();
    const SourcePos p = here();
    const std::string name = ident("resource kind");
    auto k = parse_resource_kind(name);
    if (!k) fail(p, "unknown resource kind '" + name + "'");
    return *k;
  }

  // KIND "(" party ("," party)+ ")" "as" tag+ ; tags are read up to the kind's arity.
  ResourceDecl resource(const Scope& scope) {
    ResourceDecl r;
    const SourcePos p = here();
    r.kind = resource_kind();
    punct('(');
    do {
      skip();
      const SourcePos pp = here();
      std::string party = ident("party name");
      if (!scope.principal.count(party)) fail(pp, "unknown party '" + party + "'");
      if (std::find(r.parties.begin(), r.parties.end(), party) != r.parties.end())
        fail(pp, "party '" + party + "' repeated in resource");
      r.parties.push_back(std::move(party));
    } while (try_punct(','));
    punct(')');
    const auto arity = static_cast<std::size_t>(resource_arity(r.kind));
    if (r.parties.size() != arity)
      fail(p, std::string(resource_name(r.kind)) + " takes " + std::to_string(arity) + " parties");
    keyword("as");
    for (std::size_t k = 0; k < arity; ++k) {
      skip();
      const SourcePos tp = here();
      std::string tag = ident("subsystem tag");
      if (scope.subsystems.count(tag) || std::find(r.tags.begin(), r.tags.end(), tag) != r.tags.end())
        fail(tp, "subsystem tag '" + tag + "' is already in use");
      r.tags.push_back(std::move(tag));
    }
    return r;
  }

  void header() {
    auto& p = doc_.protocol;
    if (try_keyword("protocol")) p.name = ident("protocol name");
    keyword("parties");
    punct('{');
    do {
      skip();
      const SourcePos pp = here();
      std::string name = ident("party name");
      punct(':');
      skip();
      const SourcePos dp = here();
      const int dim = integer("party dimension");
      if (dim < 2) fail(dp, "party dimension must be at least 2");
      if (root_scope_.principal.count(name)) fail(pp, "duplicate party '" + name + "'");
      root_scope_.principal[name] = name;
      root_scope_.subsystems[name] = {name, dim};
      p.parties.push_back({name, dim});
      try_punct(',');
      skip();
    } while (cur() != '}' && !at_end());
    punct('}');
    keyword("basis");
    p.basis = ident("basis name");
    if (try_keyword("upper_bound")) p.upper_bound = true;
    while (try_keyword("resource")) {
      skip();
      const SourcePos rp = here();
      ResourceDecl r = resource(root_scope_);
      for (const auto& prev : p.resources)
        for (const auto& t : r.tags)
          if (std::find(prev.tags.begin(), prev.tags.end(), t) != prev.tags.end())
            fail(rp, "subsystem tag '" + t + "' declared twice");
      p.resources.push_back(std::move(r));
    }
  }

  NodePtr record(NodePtr n, SourcePos p) {
    doc_.spans[n.get()] = p;
    return n;
  }

  NodePtr node(const Scope& scope, int depth) {
    if (depth > kMaxDepth) fail(here(), "protocol nested too deeply");
    skip();
    const SourcePos p = here();
    if (try_keyword("measure")) return record(measure_node(scope, depth), p);
    if (try_keyword("attach")) return record(attach_node(scope, depth), p);
    if (try_keyword("merge")) return record(merge_node(scope, depth), p);
    if (try_keyword("identify")) return record(identify(label()), p);
    if (try_keyword("distinguishable")) {
      punct('{');
      std::vector<std::string> labels;
      std::set<std::string> seen;
      skip();
      while (cur() != '}') {
        if (at_end()) fail(here(), "unterminated distinguishable set");
        const SourcePos lp = here();
        std::string l = label();
        if (!seen.insert(l).second) fail(lp, "label '" + l + "' repeated");
        labels.push_back(std::move(l));
        skip();
      }
      punct('}');
      if (labels.empty()) fail(p, "distinguishable set is empty");
      return record(distinguishable(std::move(labels)), p);
    }
    if (try_keyword("fail")) return record(gnpb::fail(), p);
    if (peek_ident("mirror")) fail(p, "mirror is only allowed as a measurement outcome");
    fail(p, "expected a protocol node, found " + describe_next());
  }

  NodePtr attach_node(const Scope& scope, int depth) {
    skip();
    const SourcePos p = here();
    ResourceDecl r = resource(scope);
    const auto& decl = doc_.protocol.resources;
    if (std::find(decl.begin(), decl.end(), r) == decl.end()) fail(p, "resource is not declared in the header");
    Scope inner = scope;
    for (std::size_t k = 0; k < r.tags.size(); ++k) inner.subsystems[r.tags[k]] = {r.parties[k], resource_local_dim(r.kind)};
    auto child = node(inner, depth + 1);
    return attach(r.kind, r.parties, r.tags, child);
  }

  NodePtr merge_node(const Scope& scope, int depth) {
    skip();
    const SourcePos sp = here();
    const std::string source = ident("party name");
    keyword("into");
    skip();
    const SourcePos dp = here();
    const std::string dest = ident("party name");
    if (!scope.principal.count(source)) fail(sp, "unknown party '" + source + "'");
    if (!scope.principal.count(dest)) fail(dp, "unknown party '" + dest + "'");
    if (source == dest) fail(dp, "cannot merge a party into itself");
    keyword("dim");
    skip();
    const SourcePos np = here();
    const int dim = integer("merge dimension");
    const std::string& src_tag = scope.principal.at(source);
    const std::string& dst_tag = scope.principal.at(dest);
    const int src_dim = scope.subsystems.at(src_tag).dim;
    if (dim < 2 || dim > src_dim)
      fail(np, "merge dimension " + std::to_string(dim) + " outside [2, " + std::to_string(src_dim) + "]");
    Scope inner = scope;
    const std::string merged = dst_tag + src_tag;
    if (inner.subsystems.count(merged)) fail(dp, "merged tag '" + merged + "' is already in use");
    const int merged_dim = inner.subsystems.at(dst_tag).dim * src_dim;
    inner.subsystems.erase(src_tag);
    inner.subsystems.erase(dst_tag);
    for (auto& [tag, s] : inner.subsystems)
      if (s.owner == source) s.owner = dest;
    inner.subsystems[merged] = {dest, merged_dim};
    inner.principal.erase(source);
    inner.principal[dest] = merged;
    auto child = node(inner, depth + 1);
    return merge(source, dest, dim, child);
  }

  KetSpec ket_spec(int dim) {
    skip();
    const SourcePos p = here();
    KetSpec k;
    if (try_punct('(')) {
      k.first = integer("level");
      skip();
      if (cur() == '+' || cur() == '-') {
        k.sign = cur() == '-' ? -1 : 1;
        advance();
      } else {
        fail(here(), "expected '+' or '-', found " + describe_next());
      }
      k.second = integer("level");
      punct(')');
      punct('/');
      keyword("sqrt2");
      if (k.first == k.second) fail(p, "superposition of a level with itself");
    } else {
      k.first = integer("level");
    }
    if (k.first >= dim || k.second >= dim)
      fail(p, "ket level out of range for dimension " + std::to_string(dim));
    return k;
  }

  ProjectorExpr expr(const Scope& scope, const std::string& actor) {
    ProjectorExpr e;
    if (try_keyword("rest")) {
      e.rest = true;
      return e;
    }
    do {
      skip();
      if (cur() != 'P') fail(here(), "expected 'P[' or 'rest', found " + describe_next());
      advance();
      punct('[');
      ProjectorTerm t;
      do {
        skip();
        const SourcePos lp = here();
        KetList kl;
        kl.label = ident("subsystem tag");
        auto it = scope.subsystems.find(kl.label);
        if (it == scope.subsystems.end()) fail(lp, "unknown subsystem '" + kl.label + "'");
        if (it->second.owner != actor)
          fail(lp, "subsystem '" + kl.label + "' is held by " + it->second.owner + ", not " + actor);
        for (const auto& f : t.factors)
          if (f.label == kl.label) fail(lp, "subsystem '" + kl.label + "' repeated in one term");
        punct(':');
        if (try_keyword("I")) {
          kl.identity = true;
        } else {
          punct('{');
          do kl.kets.push_back(ket_spec(it->second.dim));
          while (try_punct(','));
          punct('}');
        }
        t.factors.push_back(std::move(kl));
      } while (try_punct(','));
      punct(']');
      e.terms.push_back(std::move(t));
    } while (try_punct('+'));
    return e;
  }

  Symmetry symmetry(const Scope& scope) {
    Symmetry s;
    punct('{');
    skip();
    while (cur() != '}') {
      const SourcePos tp = here();
      const std::string tag = ident("subsystem tag");
      auto it = scope.subsystems.find(tag);
      if (it == scope.subsystems.end()) fail(tp, "unknown subsystem '" + tag + "'");
      if (s.permutations.count(tag)) fail(tp, "subsystem '" + tag + "' repeated");
      punct(':');
      punct('[');
      std::vector<int> perm;
      do perm.push_back(integer("level"));
      while (try_punct(','));
      punct(']');
      std::vector<int> sorted = perm;
      std::sort(sorted.begin(), sorted.end());
      bool ok = static_cast<int>(perm.size()) == it->second.dim;
      for (std::size_t k = 0; ok && k < sorted.size(); ++k) ok = sorted[k] == static_cast<int>(k);
      if (!ok) fail(tp, "not a permutation of the levels of '" + tag + "'");
      s.permutations[tag] = std::move(perm);
      skip();
    }
    punct('}');
    return s;
  }

  NodePtr measure_node(const Scope& scope, int depth) {
    keyword("by");
    skip();
    const SourcePos ap = here();
    const std::string actor = ident("party name");
    if (!scope.principal.count(actor)) fail(ap, "unknown party '" + actor + "'");
    punct('{');
    std::vector<Effect> effects;
    bool has_rest = false;
    skip();
    while (cur() != '}') {
      if (at_end()) fail(here(), "unterminated effect list");
      const SourcePos ep = here();
      Effect e;
      e.name = ident("effect name");
      for (const auto& prev : effects)
        if (prev.name == e.name) fail(ep, "duplicate effect '" + e.name + "'");
      punct('=');
      e.expr = expr(scope, actor);
      if (e.expr.rest) {
        if (has_rest) fail(ep, "more than one rest effect");
        has_rest = true;
      }
      effects.push_back(std::move(e));
      skip();
    }
    const SourcePos close = here();
    punct('}');
    if (effects.empty()) fail(close, "measurement has no effects");
    keyword("outcomes");
    punct('{');
    std::map<std::string, NodePtr> children;
    std::map<std::string, SourcePos> mirrors;
    skip();
    while (cur() != '}') {
      if (at_end()) fail(here(), "unterminated outcome list");
      const SourcePos op = here();
      const std::string name = ident("outcome name");
      if (std::none_of(effects.begin(), effects.end(), [&](const Effect& e) { return e.name == name; }))
        fail(op, "outcome '" + name + "' has no effect");
      if (children.count(name)) fail(op, "duplicate outcome '" + name + "'");
      punct('-');
      punct('>');
      skip();
      const SourcePos np = here();
      if (try_keyword("mirror")) {
        skip();
        mirrors[name] = here();
        const std::string source = ident("outcome name");
        keyword("under");
        children[name] = record(mirror(source, symmetry(scope)), np);
      } else {
        children[name] = node(scope, depth + 1);
      }
      skip();
    }
    const SourcePos end = here();
    punct('}');
    for (const auto& e : effects)
      if (!children.count(e.name)) fail(end, "outcome '" + e.name + "' is not handled");
    for (const auto& [name, p] : mirrors) {
      const auto& m = std::get<Mirror>(children.at(name)->body);
      auto it = children.find(m.source);
      if (it == children.end() || m.source == name) fail(p, "mirror source '" + m.source + "' is not a sibling outcome");
      if (std::holds_alternative<Mirror>(it->second->body)) fail(p, "mirror source '" + m.source + "' is itself a mirror");
    }
    return measure(actor, std::move(effects), std::move(children));
  }
};

}  // namespace

PdlDocument parse_pdl(std::string_view text) { return Parser(text).run(); }

}  // namespace gnpb
