#include "gnpb/protocols.hpp"

#include <cctype>
#include <stdexcept>

namespace gnpb {

namespace {

using Labels = std::vector<std::string>;

Labels psi(int k) {
  Labels out;
  for (const char* s1 : {"+", "-"})
    for (const char* s2 : {"+", "-"}) out.push_back("psi(" + std::string(s1) + "," + s2 + ")_" + std::to_string(k));
  return out;
}

Labels fam(const std::string& stem, int k) {
  return {stem + "(+)_" + std::to_string(k), stem + "(-)_" + std::to_string(k)};
}

Labels cat(std::initializer_list<Labels> parts) {
  Labels out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

NodePtr dset(Labels l) { return distinguishable(std::move(l)); }

NamedProtocol finish(std::string name, std::string basis, int dim, std::vector<ResourceDecl> resources,
                     NodePtr partial, bool upper_bound = false) {
  NamedProtocol p;
  p.name = std::move(name);
  p.basis = std::move(basis);
  p.parties = {{"A", dim}, {"B", dim}, {"C", dim}};
  p.resources = std::move(resources);
  p.partial = std::move(partial);
  p.root = expand_mirrors(p.partial);
  p.upper_bound = upper_bound;
  return p;
}

// Bob's tag-splitting first step shared by the (3,3) protocols with an A–B pair.
NodePtr bob_step(const std::string& btag, std::initializer_list<int> low, std::initializer_list<int> high, NodePtr m,
                 Symmetry mirror_sym) {
  return measure("B",
                 {{"M", sum({P({on("B", low), on(btag, {0})}), P({on("B", high), on(btag, {1})})})}, {"Mbar", rest()}},
                 {{"M", std::move(m)}, {"Mbar", mirror("M", std::move(mirror_sym))}});
}

NodePtr charlie_step(const std::string& ctag, std::initializer_list<int> low, std::initializer_list<int> high,
                     NodePtr n, Symmetry mirror_sym) {
  return measure("C",
                 {{"N", sum({P({on("C", low), on(ctag, {0})}), P({on("C", high), on(ctag, {1})})})}, {"Nbar", rest()}},
                 {{"N", std::move(n)}, {"Nbar", mirror("N", std::move(mirror_sym))}});
}

// A two-outcome test {E, rest} with children for both.
NodePtr binary(const std::string& actor, const std::string& name, ProjectorExpr e, NodePtr yes, NodePtr no) {
  const std::string other = name + "bar";
  return measure(actor, {{name, std::move(e)}, {other, rest()}}, {{name, std::move(yes)}, {other, std::move(no)}});
}

Labels shift_labels() {
  return {"ket(0,1,eta+)", "ket(0,1,eta-)", "ket(1,eta+,0)", "ket(1,eta-,0)",
          "ket(eta+,0,1)", "ket(eta-,0,1)", "ket(0,0,0)",    "ket(1,1,1)"};
}

}  // namespace

NodePtr shift_upb_subprotocol(std::pair<std::string, std::string> epr_endpoints, ShiftOptions opt) {
  const auto& [p1, p2] = epr_endpoints;
  if (p1 == p2) throw std::invalid_argument("shift-UPB subprotocol needs two distinct parties");
  if (opt.measurer_tag.empty()) opt.measurer_tag = std::string(1, static_cast<char>(std::tolower(p1.front())));
  if (opt.partner_tag.empty()) opt.partner_tag = std::string(1, static_cast<char>(std::tolower(p2.front())));
  if (opt.labels.empty()) opt.labels = shift_labels();
  NodePtr t = measure(p1,
                      {{"T", sum({P({on(p1, {opt.level0}), on(opt.measurer_tag, {0})}),
                                  P({on(p1, {opt.level1}), on(opt.measurer_tag, {1})})})},
                       {"Tbar", rest()}},
                      {{"T", dset(opt.labels)}, {"Tbar", dset(opt.labels)}});
  if (!opt.attach_epr) return t;
  return attach(ResourceKind::EPR, {p1, p2}, {opt.measurer_tag, opt.partner_tag}, std::move(t));
}

NamedProtocol shift_upb_protocol(std::pair<std::string, std::string> epr_endpoints) {
  auto root = shift_upb_subprotocol(epr_endpoints);
  const auto& a = std::get<AttachResource>(root->body);
  std::string name = "shift_upb_";
  for (const auto& p : {epr_endpoints.first, epr_endpoints.second})
    name += static_cast<char>(std::tolower(p.front()));
  return finish(name, "shift_upb_222", 2, {{ResourceKind::EPR, a.parties, a.tags}}, root);
}

NamedProtocol prop5_protocol(Prop5Target target) {
  NodePtr m;
  if (target == Prop5Target::II_33) {
    m = measure("A",
                {{"K1", sum({P({on("AB", {3, 6, 7, 8}), on("a", {0})})})},
                 {"K2", sum({P({on("AB", {3, 4, 6, 7, 8}), on("a", {1})})})},
                 {"K3", rest()}},
                {{"K1", dset(cat({psi(3), psi(5)}))},
                 {"K2", dset(cat({psi(6), {"phi(2)"}}))},
                 {"K3", binary("C", "N'", sum({P({on("C", {0}), id("c")})}), dset(cat({psi(4), {"phi(0)"}})),
                               binary("A", "K'", sum({P({on("AB", {4}), id("a")})}), identify("phi(1)"),
                                      dset(cat({psi(1), psi(2)}))))}});
  } else {
    NodePtr k1 = binary("C", "N'", sum({P({on("C", {0}), id("c")})}),
                        binary("A", "K'", sum({P({on("AB", {0}), id("a")})}), identify("phi(0)"), dset(fam("beta", 1))),
                        binary("A", "K'", sum({P({on("AB", {4}), id("a")})}), identify("phi(1)"), dset(fam("gamma", 1))));
    NodePtr k8 = binary("C", "N'", sum({P({on("C", {1}), id("c")})}),
                        binary("A", "K'", sum({P({on("AB", {6, 7}), id("a")})}), dset(fam("beta", 3)), dset(fam("gamma", 4))),
                        measure("A",
                                {{"K1'", sum({P({on("AB", {7}), id("a")})})},
                                 {"K2'", sum({P({on("AB", {2}), id("a")})})},
                                 {"K3'", rest()}},
                                {{"K1'", dset(fam("alpha", 4))}, {"K2'", dset(fam("alpha", 2))}, {"K3'", dset(fam("beta", 2))}}));
    m = measure("A",
                {{"K1", sum({P({on("AB", {0, 3, 4}), on("a", {0})})})},
                 {"K2", sum({P({on("AB", {1}), on("a", {0})})})},
                 {"K3", sum({P({on("AB", {5}), on("a", {0})})})},
                 {"K4", sum({P({on("AB", {0, 6}), on("a", {1})})})},
                 {"K5", sum({P({on("AB", {1, 4}), on("a", {1})})})},
                 {"K6", sum({P({on("AB", {3, 5}), on("a", {1})})})},
                 {"K7", sum({P({on("AB", {8}), on("a", {1})})})},
                 {"K8", rest()}},
                {{"K1", k1},
                 {"K2", dset(fam("alpha", 1))},
                 {"K3", dset(fam("alpha", 3))},
                 {"K4", dset(fam("gamma", 2))},
                 {"K5", dset(fam("gamma", 3))},
                 {"K6", dset(fam("beta", 4))},
                 {"K7", identify("phi(2)")},
                 {"K8", k8}});
  }
  NodePtr root = merge("B", "A", 3,
                       attach(ResourceKind::EPR, {"A", "C"}, {"a", "c"},
                              charlie_step("c", {0, 1}, {2}, m, swap01({"a", "c"}))));
  const bool ii = target == Prop5Target::II_33;
  return finish(ii ? "prop5" : "prop5b", ii ? "B_II_33" : "B_IIb_33", 3, {{ResourceKind::EPR, {"A", "C"}, {"a", "c"}}},
                root);
}

NamedProtocol prop6_protocol() {
  NodePtr tail = binary(
      "C", "N'", sum({P({on("C", {2}), id("c1")})}), dset(cat({psi(6), {"phi(2)"}})),
      binary("B", "M'", sum({P({on("B", {0}), id("b1")})}), dset(cat({psi(5), {"phi(0)"}})),
             binary("A", "K'", sum({P({on("A", {2}), id("a1"), id("a2")})}), dset(psi(3)),
                    dset(cat({psi(4), {"phi(1)"}})))));
  NodePtr k = measure("A",
                      {{"K1", sum({P({on("A", {0, 1}), on("a1", {1}), on("a2", {0})})})},
                       {"K2", sum({P({on("A", {0}), on("a1", {0}), on("a2", {0})})})},
                       {"K3", rest()}},
                      {{"K1", dset(psi(2))}, {"K2", dset(psi(1))}, {"K3", tail}});
  NodePtr n = charlie_step("c1", {1, 2}, {0}, k, swap01({"a2", "c1"}));
  NodePtr root = attach(ResourceKind::EPR, {"A", "B"}, {"a1", "b1"},
                        attach(ResourceKind::EPR, {"C", "A"}, {"c1", "a2"},
                               bob_step("b1", {0, 1}, {2}, n, swap01({"a1", "b1"}))));
  return finish("prop6", "B_II_33", 3,
                {{ResourceKind::EPR, {"A", "B"}, {"a1", "b1"}}, {ResourceKind::EPR, {"C", "A"}, {"c1", "a2"}}}, root);
}

NamedProtocol prop7_protocol() {
  ShiftOptions shift;
  shift.measurer_tag = "b2";
  shift.partner_tag = "c2";
  shift.labels = cat({fam("alpha", 1), fam("beta", 1), fam("gamma", 1), {"phi(0)", "phi(1)"}});
  shift.attach_epr = false;

  NodePtr last = measure("A",
                         {{"K1'", sum({P({on("A", {0}), on("a1", {1}), id("a2")})})},
                          {"K2'", sum({P({on("A", {2}), id("a1"), on("a2", {0})})})},
                          {"K3'", sum({P({on("A", {1}), id("a1"), id("a2")})})},
                          {"K4'", sum({P({on("A", {0, 2}), on("a1", {0}), on("a2", {1})})})},
                          {"K5'", rest()}},
                         {{"K1'", dset(fam("alpha", 2))},
                          {"K2'", dset(fam("beta", 2))},
                          {"K3'", dset(fam("beta", 4))},
                          {"K4'", dset(fam("gamma", 2))},
                          {"K5'", fail()}});
  NodePtr k4 = binary("C", "N'", sum({P({on("C", {1}), id("c1")})}), dset(cat({fam("beta", 3), fam("gamma", 4)})),
                      binary("B", "M'", sum({P({on("B", {1}), id("b1")})}), dset(cat({fam("alpha", 4), fam("gamma", 3)})),
                             last));
  NodePtr k = measure("A",
                      {{"K1", sum({P({on("A", {1}), on("a1", {1}), on("a2", {0})})})},
                       {"K2", sum({P({on("A", {2}), on("a1", {1}), on("a2", {1})})})},
                       {"K3", sum({P({on("A", {0, 1}), on("a1", {0}), on("a2", {0})})})},
                       {"K4", rest()}},
                      {{"K1", dset(fam("alpha", 3))},
                       {"K2", identify("phi(2)")},
                       {"K3", shift_upb_subprotocol({"B", "C"}, shift)},
                       {"K4", k4}});
  NodePtr n = charlie_step("c1", {0, 1}, {2}, k, swap01({"a2", "c1"}));
  NodePtr root =
      attach(ResourceKind::EPR, {"A", "B"}, {"a1", "b1"},
             attach(ResourceKind::EPR, {"C", "A"}, {"c1", "a2"},
                    attach(ResourceKind::EPR, {"B", "C"}, {"b2", "c2"},
                           bob_step("b1", {0, 1}, {2}, n, swap01({"a1", "b1"})))));
  return finish("prop7", "B_IIb_33", 3,
                {{ResourceKind::EPR, {"A", "B"}, {"a1", "b1"}},
                 {ResourceKind::EPR, {"C", "A"}, {"c1", "a2"}},
                 {ResourceKind::EPR, {"B", "C"}, {"b2", "c2"}}},
                root);
}

namespace {

// Outcome sets shared by the GHZ protocol and its two-EPR variant.
const Labels kK1 = {"ket(0,0,0)", "ket(0,0,1)", "ket(0,0,2)", "ket(0,1,0)",
                    "ket(0,1,1)", "ket(0,1,2)", "ket(0,eta+,3)", "ket(0,eta-,3)"};
const Labels kK2 = {"ket(0,2,0)", "ket(0,2,1)", "ket(0,2,2)", "ket(0,3,0)", "ket(0,3,1)", "ket(0,3,chi+)",
                    "ket(0,3,chi-)", "ket(1,2,0)", "ket(1,2,1)", "ket(1,2,2)", "ket(1,3,0)", "ket(1,3,1)",
                    "ket(1,3,2)", "ket(1,3,3)", "ket(eta+,2,3)", "ket(eta-,2,3)"};

NodePtr alice_k(const std::string& atag, NodePtr k3) {
  return measure("A",
                 {{"K1", sum({P({on("A", {0}), on(atag, {0})})})},
                  {"K2", sum({P({on("A", {0, 1}), on(atag, {1})})})},
                  {"K3", rest()}},
                 {{"K1", dset(kK1)}, {"K2", dset(kK2)}, {"K3", std::move(k3)}});
}

NodePtr bob_tag_split(const std::string& btag, NodePtr m, Symmetry sym) {
  return bob_step(btag, {0, 1}, {2, 3}, std::move(m), std::move(sym));
}

}  // namespace

NamedProtocol prop8_protocol() {
  ShiftOptions shift;
  shift.measurer_tag = "b2";
  shift.partner_tag = "c2";
  shift.level0 = 3;
  shift.level1 = 2;
  shift.labels = {"ket(2,2,1)", "ket(2,chi+,2)", "ket(2,chi-,2)", "ket(3,2,xi+)",
                  "ket(3,2,xi-)", "ket(3,3,2)", "ket(chi+,3,1)", "ket(chi-,3,1)"};

  NodePtr step5 = measure("A",
                          {{"K1'", sum({P({on("A", {1}), id("a")})})},
                           {"K2'", sum({P({on("A", {2}), id("a")})})},
                           {"K3'", rest()}},
                          {{"K1'", dset({"ket(1,1,0)", "ket(1,1,1)", "ket(1,1,3)"})},
                           {"K2'", dset({"ket(2,1,0)", "ket(2,1,1)", "ket(2,2,0)", "ket(2,xi+,3)", "ket(2,xi-,3)"})},
                           {"K3'", dset({"ket(3,1,1)", "ket(3,1,3)", "ket(3,2,3)", "ket(3,xi+,0)", "ket(3,xi-,0)"})}});
  NodePtr step4 = measure("B",
                          {{"M1'", sum({P({on("B", {0}), id("b")})})},
                           {"M2'", sum({P({on("B", {3}), id("b")})})},
                           {"M3'", rest()}},
                          {{"M1'", dset({"ket(1,0,0)", "ket(1,0,1)", "ket(2,0,0)", "ket(2,0,1)", "ket(3,0,3)",
                                         "ket(3,0,eta+)", "ket(3,0,eta-)", "ket(xi+,0,3)", "ket(xi-,0,3)"})},
                           {"M2'", dset({"ket(2,3,0)", "ket(2,3,3)", "ket(3,3,0)", "ket(3,3,3)"})},
                           {"M3'", step5}});
  NodePtr step3 = measure("C",
                          {{"N1", sum({P({on("C", {2}), on("c", {0})})})},
                           {"N2", sum({P({on("C", {1, 2}), on("c", {1})})})},
                           {"N3", rest()}},
                          {{"N1", dset({"ket(1,0,2)", "ket(1,1,2)", "ket(2,0,2)", "ket(2,1,2)", "ket(3,eta+,2)",
                                        "ket(3,eta-,2)"})},
                           {"N2", shift_upb_subprotocol({"B", "C"}, shift)},
                           {"N3", step4}});
  NodePtr root = attach(ResourceKind::GHZ, {"A", "B", "C"}, {"a", "b", "c"},
                        bob_tag_split("b", alice_k("a", step3), swap01({"a", "b", "c"})));
  return finish("prop8", "B_II_43", 4,
                {{ResourceKind::GHZ, {"A", "B", "C"}, {"a", "b", "c"}}, {ResourceKind::EPR, {"B", "C"}, {"b2", "c2"}}},
                root);
}

NamedProtocol remark2_protocol() {
  // Derived continuation for the K3 outcome after Bob's twist-breaking step.
  NodePtr tail = measure(
      "C", {{"Q1", sum({P({on("C", {0, 1}), on("c", {1})})})}, {"Q2", rest()}},
      {{"Q1", dset({"ket(1,0,0)", "ket(1,0,1)", "ket(2,0,0)", "ket(2,0,1)", "ket(2,3,0)", "ket(3,0,eta+)",
                    "ket(3,0,eta-)", "ket(3,3,0)", "ket(chi+,3,1)", "ket(chi-,3,1)"})},
       {"Q2", binary("A", "R", sum({P({on("A", {3})})}),
                     dset({"ket(3,0,3)", "ket(3,1,1)", "ket(3,1,3)", "ket(3,2,3)", "ket(3,2,xi+)", "ket(3,2,xi-)",
                           "ket(3,3,2)", "ket(3,3,3)", "ket(3,eta+,2)", "ket(3,eta-,2)", "ket(3,xi+,0)",
                           "ket(3,xi-,0)"}),
                     dset({"ket(1,0,2)", "ket(1,1,0)", "ket(1,1,1)", "ket(1,1,2)", "ket(1,1,3)", "ket(2,0,2)",
                           "ket(2,1,0)", "ket(2,1,1)", "ket(2,1,2)", "ket(2,2,0)", "ket(2,2,1)", "ket(2,3,3)",
                           "ket(2,chi+,2)", "ket(2,chi-,2)", "ket(2,xi+,3)", "ket(2,xi-,3)", "ket(xi+,0,3)",
                           "ket(xi-,0,3)"}))}});
  NodePtr twist = measure("B",
                          {{"T", sum({P({on("B", {1, 2}), on("bp", {0})}), P({on("B", {0, 3}), on("bp", {1})})})},
                           {"Tbar", rest()}},
                          {{"T", tail}, {"Tbar", mirror("T", swap01({"bp", "c"}))}});
  NodePtr k3 = attach(ResourceKind::EPR, {"B", "C"}, {"bp", "c"}, twist);
  NodePtr root = attach(ResourceKind::EPR, {"A", "B"}, {"a", "b"}, bob_tag_split("b", alice_k("a", k3), swap01({"a", "b"})));
  return finish("remark2", "B_II_43", 4,
                {{ResourceKind::EPR, {"A", "B"}, {"a", "b"}}, {ResourceKind::EPR, {"B", "C"}, {"bp", "c"}}}, root);
}

NamedProtocol basis_I_43_protocol() {
  const Labels bennett_bc = {"ket(3,0,eta+)", "ket(3,0,eta-)", "ket(3,eta+,2)", "ket(3,eta-,2)", "ket(3,2,xi+)",
                             "ket(3,2,xi-)",  "ket(3,xi+,0)",  "ket(3,xi-,0)",  "ket(3,1,1)"};
  const Labels bennett_ab = {"ket(0,eta+,3)", "ket(0,eta-,3)", "ket(eta+,2,3)", "ket(eta-,2,3)", "ket(2,xi+,3)",
                             "ket(2,xi-,3)",  "ket(xi+,0,3)",  "ket(xi-,0,3)",  "ket(1,1,3)"};
  Labels grid;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 3; ++c)
        grid.push_back("ket(" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + ")");

  NodePtr three = binary(
      "C", "C3", sum({P({on("C", {3})})}), dset({"ket(3,0,3)", "ket(3,1,3)", "ket(3,2,3)", "ket(3,3,3)"}),
      binary("B", "B3", sum({P({on("B", {3})})}), dset({"ket(3,3,0)", "ket(3,3,1)", "ket(3,3,2)"}),
             merge("C", "B", 3, dset(bennett_bc))));
  NodePtr other = binary(
      "C", "C3", sum({P({on("C", {3})})}),
      binary("B", "B3", sum({P({on("B", {3})})}), dset({"ket(0,3,3)", "ket(1,3,3)", "ket(2,3,3)"}),
             merge("B", "A", 3, dset(bennett_ab))),
      dset(grid));
  NodePtr root = binary("A", "A3", sum({P({on("A", {3})})}), three, other);
  return finish("basis_I_43", "B_I_43", 4, {}, root, true);
}

std::vector<std::string> builtin_protocol_names() {
  return {"prop5",     "prop5b",       "prop6",        "prop7",       "prop8",
          "remark2",   "basis_I_43",   "shift_upb_ab", "shift_upb_bc", "shift_upb_ca"};
}

NamedProtocol builtin_protocol(std::string_view name) {
  if (name == "prop5") return prop5_protocol(Prop5Target::II_33);
  if (name == "prop5b") return prop5_protocol(Prop5Target::IIb_33);
  if (name == "prop6") return prop6_protocol();
  if (name == "prop7") return prop7_protocol();
  if (name == "prop8") return prop8_protocol();
  if (name == "remark2") return remark2_protocol();
  if (name == "basis_I_43") return basis_I_43_protocol();
  if (name == "shift_upb_ab") return shift_upb_protocol({"A", "B"});
  if (name == "shift_upb_bc") return shift_upb_protocol({"B", "C"});
  if (name == "shift_upb_ca") return shift_upb_protocol({"C", "A"});
  throw std::out_of_range("unknown protocol '" + std::string(name) + "'");
}

}  // namespace gnpb
