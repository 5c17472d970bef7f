#include <cstdio>
#include <cstdlib>

#include <json.hpp>

#include "gnpb/engine.hpp"

namespace gnpb {

namespace {

using nlohmann::json;

double sig12(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

json ledger_json(const ResourceLedger& l) {
  json entries = json::array();
  for (const auto& e : l.entries)
    entries.push_back({{"kind", e.kind},
                       {"endpoints", e.endpoints},
                       {"expected", sig12(e.expected)},
                       {"unit_ebits", sig12(e.unit_ebits)},
                       {"counts_as_ebits", e.counts_as_ebits},
                       {"via_merge", e.via_merge}});
  return {{"entries", entries},
          {"total_ebits", sig12(l.total_ebits)},
          {"ghz_expected", sig12(l.ghz_expected)},
          {"ghz_bound_ebits", sig12(l.ghz_bound_ebits)},
          {"w_expected", sig12(l.w_expected)},
          {"local_dim", l.local_dim},
          {"baseline_ebits", sig12(l.baseline_ebits)},
          {"below_baseline", l.total_ebits < l.baseline_ebits},
          {"upper_bound", l.upper_bound}};
}

}  // namespace

std::string ledger_to_json(const ResourceLedger& l, int indent) { return ledger_json(l).dump(indent); }

std::string report_to_json(const VerificationReport& r, int indent) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"path", c.path}, {"check", c.check}, {"passed", c.passed}, {"detail", c.detail}});
  json leaves = json::array();
  for (const auto& l : r.leaves)
    leaves.push_back({{"path", l.path},
                      {"kind", l.kind},
                      {"declared", l.declared},
                      {"survivors", l.survivors},
                      {"passed", l.passed},
                      {"strategy", l.strategy}});
  json branches = json::array();
  for (const auto& b : r.branches) {
    json w = json::array();
    for (const auto& [lab, p] : b.weights) w.push_back({{"state", lab}, {"probability", sig12(p)}});
    branches.push_back({{"path", b.path},
                        {"weights", w},
                        {"consumed", b.consumed},
                        {"returned", b.returned},
                        {"merges", b.merges},
                        {"cuts", b.cuts},
                        {"success", b.success}});
  }
  json resources = json::array();
  for (const auto& x : r.resources)
    resources.push_back({{"id", x.id}, {"kind", std::string(resource_name(x.kind))}, {"parties", x.parties}, {"tags", x.tags}});
  json merges = json::array();
  for (const auto& m : r.merges)
    merges.push_back({{"id", m.id}, {"source", m.source}, {"destination", m.destination}, {"dim", m.dim}});
  json ident = json::array();
  for (const auto& [lab, p] : r.identification) ident.push_back({{"state", lab}, {"probability", sig12(p)}});
  json doc{{"basis", r.basis},
           {"state_count", r.state_count},
           {"passed", r.passed},
           {"failures", r.failures},
           {"identification", ident},
           {"resources", resources},
           {"merges", merges},
           {"ledger", ledger_json(r.ledger)},
           {"checks", checks},
           {"leaves", leaves},
           {"branches", branches}};
  return doc.dump(indent);
}

}  // namespace gnpb
