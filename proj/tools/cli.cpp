#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gnpb/engine.hpp"
#include "gnpb/opm.hpp"
#include "gnpb/pdl.hpp"

namespace gnpb::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kUsage = 1;
constexpr int kFailed = 2;

// Thrown for anything the user got wrong: unknown names, unreadable files, bad syntax.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? sep : "") + xs[i];
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool looks_like_file(const std::string& arg, const char* ext) {
  return fs::path(arg).extension() == ext || arg.find('/') != std::string::npos;
}

OrthoProductBasis load_basis(const std::string& arg) {
  if (looks_like_file(arg, ".json")) {
    try {
      return basis_from_json(read_file(arg), fs::path(arg).stem().string());
    } catch (const std::invalid_argument& e) {
      throw UsageError(arg + ": " + e.what());
    }
  }
  try {
    return builtin_basis(arg);
  } catch (const std::out_of_range&) {
    throw UsageError("unknown basis '" + arg + "' (see `gnpb list`)");
  }
}

NamedProtocol load_protocol(const std::string& arg) {
  if (looks_like_file(arg, ".pdl")) {
    try {
      return parse_pdl(read_file(arg)).protocol;
    } catch (const ParseError& e) {
      throw UsageError(arg + ":" + e.what());
    }
  }
  try {
    return builtin_protocol(arg);
  } catch (const std::out_of_range&) {
    throw UsageError("unknown protocol '" + arg + "' (see `gnpb list`)");
  }
}

struct Common {
  bool json = false;
  double tol = kTol;
  double ortho_tol = kOrthoTol;

  VerifyOptions options() const { return {tol, ortho_tol}; }
};

void add_common(CLI::App* cmd, Common& c, bool tolerances) {
  cmd->add_flag("--json", c.json, "Emit JSON");
  if (tolerances) {
    cmd->add_option("--tol", c.tol, "Probability / numeric tolerance")->check(CLI::PositiveNumber);
    cmd->add_option("--ortho-tol", c.ortho_tol, "Overlap tolerance for orthogonality checks")->check(CLI::PositiveNumber);
  }
}

int cmd_list(std::ostream& out, bool json) {
  if (json) {
    nlohmann::json doc{{"bases", builtin_basis_names()}, {"protocols", nlohmann::json::array()}};
    for (const auto& n : builtin_protocol_names()) {
      const auto p = builtin_protocol(n);
      doc["protocols"].push_back({{"name", n}, {"basis", p.basis}});
    }
    out << doc.dump(2) << '\n';
    return 0;
  }
  out << "bases:\n";
  for (const auto& n : builtin_basis_names()) {
    const auto b = builtin_basis(n);
    out << "  " << n << "  (" << b.size() << " states, dim " << b.total_dim() << ")\n";
  }
  out << "protocols:\n";
  for (const auto& n : builtin_protocol_names()) out << "  " << n << "  on " << builtin_protocol(n).basis << '\n';
  return 0;
}

int cmd_check_basis(std::ostream& out, const std::string& arg, bool json) {
  const auto r = check_basis(load_basis(arg));
  if (json) {
    out << integrity_to_json(r) << '\n';
  } else {
    out << r.name << ": " << r.cardinality << " states, total dim " << r.total_dim << '\n';
    out << "  max overlap        " << num(r.max_overlap) << '\n';
    out << "  completeness rank  " << r.completeness_rank << " / " << r.total_dim << '\n';
    if (!r.unnormalized.empty()) out << "  unnormalized       " << join(r.unnormalized, " ") << '\n';
    out << "  " << (r.passed() ? (r.complete() ? "PASS (orthogonal, complete)" : "PASS (orthogonal, incomplete)")
                               : "FAIL")
        << '\n';
  }
  return r.passed() ? 0 : kFailed;
}

int cmd_classify(std::ostream& out, const std::string& arg, bool json) {
  const auto b = load_basis(arg);
  GnpbClassification c;
  try {
    c = classify(b);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (json) {
    out << classification_to_json(c) << '\n';
    return 0;
  }
  auto show = [&](const GroupVerdict& g) {
    out << "  " << join(g.group, "") << ": solution dim " << g.solution_dim
        << (g.reducible ? ", reducible" : ", irreducible") << '\n';
    if (!g.witness) return;
    for (std::size_t k = 0; k < g.witness->effects.size(); ++k)
      out << "    " << describe_projector(g.witness->effects[k]) << " -> " << g.witness->survivors[k].size()
          << " states\n";
  };
  out << c.basis << '\n';
  for (const auto& g : c.singles) show(g);
  for (const auto& g : c.pairs) show(g);
  out << "verdict: " << type_name(c.verdict) << '\n';
  return 0;
}

void print_ledger(std::ostream& out, const ResourceLedger& l) {
  for (const auto& e : l.entries) {
    out << "  " << e.kind << "(" << join(e.endpoints, ",") << ")  expected " << num(e.expected);
    if (e.unit_ebits != 1.0) out << " x " << num(e.unit_ebits) << " ebits";
    if (!e.counts_as_ebits) out << "  [not counted in ebits]";
    out << '\n';
  }
  out << "  total ebits     " << num(l.total_ebits) << (l.upper_bound ? "  (upper bound)" : "") << '\n';
  if (l.ghz_expected > 0) out << "  GHZ states      " << num(l.ghz_expected) << "  (<= " << num(l.ghz_bound_ebits) << " ebits)\n";
  if (l.w_expected > 0) out << "  W states        " << num(l.w_expected) << '\n';
  out << "  baseline        " << num(l.baseline_ebits) << "  (teleport all to one party, d=" << l.local_dim << ")\n";
}

VerificationReport run_verify(const NamedProtocol& p, const std::string& basis_override, const Common& c) {
  const auto b = load_basis(basis_override.empty() ? p.basis : basis_override);
  auto r = verify_protocol(p.root, b, c.options());
  r.ledger.upper_bound = r.ledger.upper_bound || p.upper_bound;
  return r;
}

int cmd_verify(std::ostream& out, const std::vector<std::string>& targets, const std::string& basis, const Common& c) {
  bool all_ok = true;
  nlohmann::json docs = nlohmann::json::array();
  for (const auto& t : targets) {
    const auto p = load_protocol(t);
    const auto r = run_verify(p, basis, c);
    all_ok = all_ok && r.passed;
    if (c.json) {
      auto doc = nlohmann::json::parse(report_to_json(r));
      doc["protocol"] = p.name;
      docs.push_back(std::move(doc));
      continue;
    }
    out << (p.name.empty() ? t : p.name) << " on " << r.basis << ": " << (r.passed ? "PASS" : "FAIL") << '\n';
    for (const auto& f : r.failures) out << "  " << f << '\n';
    if (r.passed) print_ledger(out, r.ledger);
  }
  if (c.json) out << (docs.size() == 1 ? docs[0] : docs).dump(2) << '\n';
  return all_ok ? 0 : kFailed;
}

int cmd_account(std::ostream& out, const std::string& target, const std::string& basis, const Common& c) {
  const auto p = load_protocol(target);
  const auto r = run_verify(p, basis, c);
  if (!r.passed) {
    out << (p.name.empty() ? target : p.name) << ": verification failed, no ledger\n";
    for (const auto& f : r.failures) out << "  " << f << '\n';
    return kFailed;
  }
  if (c.json) {
    out << ledger_to_json(r.ledger) << '\n';
  } else {
    out << (p.name.empty() ? target : p.name) << " on " << r.basis << '\n';
    print_ledger(out, r.ledger);
    out << "  " << (r.ledger.total_ebits < r.ledger.baseline_ebits ? "below" : "not below") << " baseline\n";
  }
  return 0;
}

std::vector<std::string> split_group(const std::string& s) {
  std::vector<std::string> out;
  if (s.find(',') != std::string::npos) {
    std::stringstream ss(s);
    for (std::string part; std::getline(ss, part, ',');)
      if (!part.empty()) out.push_back(part);
  } else {
    for (char ch : s) out.emplace_back(1, ch);
  }
  return out;
}

int cmd_tiles(std::ostream& out, const std::string& arg, const std::string& cut) {
  const auto b = load_basis(arg);
  const auto bar = cut.find('|');
  if (bar == std::string::npos) throw UsageError("--cut expects ROWS|COLS, e.g. AB|C");
  auto rows = split_group(cut.substr(0, bar));
  auto cols = split_group(cut.substr(bar + 1));
  std::vector<std::string> names;
  for (const auto& p : b.parties()) names.push_back(p.name);
  auto all = rows;
  all.insert(all.end(), cols.begin(), cols.end());
  auto sorted_all = all, sorted_names = names;
  std::sort(sorted_all.begin(), sorted_all.end());
  std::sort(sorted_names.begin(), sorted_names.end());
  if (rows.empty() || cols.empty() || sorted_all != sorted_names)
    throw UsageError("--cut must split the parties " + join(names, ",") + " into two nonempty groups");
  const auto t = render_tiles(b, rows);
  out << t.text;
  return 0;
}

int cmd_export(std::ostream& out, const std::vector<std::string>& names, const std::string& dir) {
  for (const auto& n : names) {
    const auto text = serialize_pdl(load_protocol(n));
    if (dir.empty()) {
      out << text;
      continue;
    }
    const auto path = fs::path(dir) / (n + ".pdl");
    std::ofstream f(path);
    if (!f || !(f << text)) throw UsageError("cannot write '" + path.string() + "'");
    out << "wrote " << path.string() << '\n';
  }
  return 0;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Verification workbench for genuinely nonlocal product bases", "gnpb"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common common;
  std::string target, basis_override, cut;
  std::vector<std::string> targets;
  bool all = false;
  std::string dir;

  auto* list = app.add_subcommand("list", "Built-in bases and protocols");
  list->add_flag("--json", common.json, "Emit JSON");

  auto* check = app.add_subcommand("check-basis", "Orthogonality and completeness of a basis");
  check->add_option("basis", target, "Built-in name or basis .json file")->required();
  add_common(check, common, false);

  auto* cls = app.add_subcommand("classify", "Local irreducibility certificate and GNPB type");
  cls->add_option("basis", target, "Built-in name or basis .json file")->required();
  add_common(cls, common, false);

  auto* ver = app.add_subcommand("verify", "Run a protocol against a basis");
  ver->add_option("protocol", targets, "Built-in name or .pdl file");
  ver->add_flag("--all", all, "Verify every built-in protocol");
  ver->add_option("--basis", basis_override, "Override the protocol's basis");
  add_common(ver, common, true);

  auto* acc = app.add_subcommand("account", "Resource ledger against the teleportation baseline");
  acc->add_option("protocol", target, "Built-in name or .pdl file")->required();
  acc->add_option("--basis", basis_override, "Override the protocol's basis");
  add_common(acc, common, true);

  auto* tiles = app.add_subcommand("tiles", "ASCII tile picture across a bipartite cut");
  tiles->add_option("basis", target, "Built-in name or basis .json file")->required();
  tiles->add_option("--cut", cut, "Row and column parties, e.g. AB|C")->required();

  auto* exp = app.add_subcommand("export", "Print built-in protocols as PDL");
  exp->add_option("protocol", targets, "Built-in names");
  exp->add_flag("--all", all, "Every built-in protocol");
  exp->add_option("--dir", dir, "Write <name>.pdl files into this directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : kUsage;
  }

  try {
    if (*list) return cmd_list(out, common.json);
    if (*check) return cmd_check_basis(out, target, common.json);
    if (*cls) return cmd_classify(out, target, common.json);
    if (*ver || *exp) {
      if (all) targets = builtin_protocol_names();
      if (targets.empty()) throw UsageError("no protocol given");
      return *ver ? cmd_verify(out, targets, basis_override, common) : cmd_export(out, targets, dir);
    }
    if (*acc) return cmd_account(out, target, basis_override, common);
    if (*tiles) return cmd_tiles(out, target, cut);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace gnpb::cli
