#include "gnpb/bases.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>
#include <tuple>
#include <unordered_set>

namespace gnpb {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

struct TwistName {
  std::string_view stem;
  int i, j;
};
constexpr std::array<TwistName, 4> kTwists{{{"eta", 0, 1}, {"xi", 1, 2}, {"kappa", 0, 2}, {"chi", 2, 3}}};

}  // namespace

Eigen::VectorXcd twisted_ket(int dim, int i, int j, int sign) {
  if (i < 0 || j < 0 || i >= dim || j >= dim || i == j) throw std::invalid_argument("twisted ket index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  v(i) = kInvSqrt2;
  v(j) = sign >= 0 ? kInvSqrt2 : -kInvSqrt2;
  return v;
}

Eigen::VectorXcd local_ket(int dim, std::string_view name) {
  if (name.size() == 1 && name[0] >= '0' && name[0] <= '9') {
    const int k = name[0] - '0';
    if (k >= dim) throw std::invalid_argument("computational ket out of range");
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
    v(k) = 1.0;
    return v;
  }
  if (name.size() >= 2) {
    const char s = name.back();
    const auto stem = name.substr(0, name.size() - 1);
    for (const auto& t : kTwists)
      if (t.stem == stem && (s == '+' || s == '-')) return twisted_ket(dim, t.i, t.j, s == '+' ? 1 : -1);
  }
  throw std::invalid_argument("unknown local ket '" + std::string(name) + "'");
}

std::string_view resource_name(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::EPR: return "EPR";
    case ResourceKind::EPR3: return "EPR3";
    case ResourceKind::GHZ: return "GHZ";
    case ResourceKind::W: return "W";
  }
  return "?";
}

std::optional<ResourceKind> parse_resource_kind(std::string_view name) {
  for (auto k : {ResourceKind::EPR, ResourceKind::EPR3, ResourceKind::GHZ, ResourceKind::W})
    if (resource_name(k) == name) return k;
  return std::nullopt;
}

int resource_arity(ResourceKind kind) {
  return (kind == ResourceKind::EPR || kind == ResourceKind::EPR3) ? 2 : 3;
}

int resource_local_dim(ResourceKind kind) { return kind == ResourceKind::EPR3 ? 3 : 2; }

Eigen::VectorXcd resource_amplitudes(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::EPR: {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(4);
      v(0) = v(3) = kInvSqrt2;
      return v;
    }
    case ResourceKind::EPR3: {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(9);
      v(0) = v(4) = v(8) = 1.0 / std::sqrt(3.0);
      return v;
    }
    case ResourceKind::GHZ: {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
      v(0) = v(7) = kInvSqrt2;
      return v;
    }
    case ResourceKind::W: {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(8);
      v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
      return v;
    }
  }
  throw std::logic_error("unhandled resource kind");
}

double resource_cut_ebits(ResourceKind kind) {
  switch (kind) {
    case ResourceKind::EPR: return 1.0;
    case ResourceKind::EPR3: return std::log2(3.0);
    case ResourceKind::GHZ: return 1.0;
    case ResourceKind::W: return std::log2(3.0) - 2.0 / 3.0;
  }
  return 0.0;
}

bool resource_counts_as_ebits(ResourceKind kind) {
  return kind == ResourceKind::EPR || kind == ResourceKind::EPR3;
}

Ket resource_ket(ResourceKind kind, std::span<const std::string> owners, std::span<const std::string> tags) {
  const auto n = static_cast<std::size_t>(resource_arity(kind));
  if (owners.size() != n || tags.size() != n) throw std::invalid_argument("resource arity mismatch");
  std::vector<Subsystem> subs;
  for (std::size_t i = 0; i < n; ++i) subs.push_back(Subsystem{{owners[i], tags[i]}, resource_local_dim(kind)});
  return make_ket(CompositeSpace(std::move(subs)), resource_amplitudes(kind));
}

OrthoProductBasis::OrthoProductBasis(std::string name, std::vector<PartySpec> parties, std::vector<ProductState> states)
    : name_(std::move(name)), parties_(std::move(parties)), states_(std::move(states)) {
  std::unordered_set<std::string> names, labels;
  for (const auto& p : parties_) {
    if (p.dim < 1) throw std::invalid_argument("party '" + p.name + "' has non-positive dimension");
    if (!names.insert(p.name).second) throw std::invalid_argument("duplicate party '" + p.name + "'");
  }
  for (const auto& s : states_) {
    if (!labels.insert(s.label).second) throw std::invalid_argument("duplicate state label '" + s.label + "'");
    if (s.factors.size() != parties_.size())
      throw std::invalid_argument("state '" + s.label + "' has the wrong number of factors");
    for (std::size_t i = 0; i < parties_.size(); ++i)
      if (s.factors[i].size() != parties_[i].dim)
        throw std::invalid_argument("state '" + s.label + "' factor dimension mismatch for party " + parties_[i].name);
  }
}

std::size_t OrthoProductBasis::total_dim() const {
  std::size_t d = 1;
  for (const auto& p : parties_) d *= static_cast<std::size_t>(p.dim);
  return d;
}

CompositeSpace OrthoProductBasis::space() const {
  std::vector<Subsystem> subs;
  for (const auto& p : parties_) subs.push_back(Subsystem{{p.name, p.name}, p.dim});
  return CompositeSpace(std::move(subs));
}

Ket OrthoProductBasis::ket(std::size_t i) const {
  const auto& s = states_.at(i);
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (const auto& f : s.factors) {
    Eigen::VectorXcd next(v.size() * f.size());
    for (Eigen::Index k = 0; k < v.size(); ++k) next.segment(k * f.size(), f.size()) = v(k) * f;
    v = std::move(next);
  }
  return make_ket(space(), std::move(v));
}

std::optional<std::size_t> OrthoProductBasis::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < states_.size(); ++i)
    if (states_[i].label == label) return i;
  return std::nullopt;
}

std::size_t OrthoProductBasis::party_index(std::string_view party) const {
  for (std::size_t i = 0; i < parties_.size(); ++i)
    if (parties_[i].name == party) return i;
  throw std::out_of_range("unknown party '" + std::string(party) + "'");
}

IntegrityReport check_basis(const OrthoProductBasis& b) {
  IntegrityReport r;
  r.name = b.name();
  r.cardinality = b.size();
  r.total_dim = b.total_dim();
  r.local_dims = b.parties();
  const auto n = static_cast<Eigen::Index>(b.size());
  if (n == 0) return r;
  Eigen::MatrixXcd cols(static_cast<Eigen::Index>(r.total_dim), n);
  for (Eigen::Index i = 0; i < n; ++i) {
    cols.col(i) = b.ket(static_cast<std::size_t>(i)).amplitudes;
    if (std::abs(cols.col(i).norm() - 1.0) > kTol) r.unnormalized.push_back(b.states()[static_cast<std::size_t>(i)].label);
  }
  Eigen::MatrixXcd gram = cols.adjoint() * cols;
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) r.max_overlap = std::max(r.max_overlap, std::abs(gram(i, j)));
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(cols);
  const auto& sv = svd.singularValues();
  const double cut = kRankCut * (sv.size() ? sv(0) : 0.0);
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++r.completeness_rank;
  return r;
}

namespace {

using Factor = std::string;  // local ket name understood by local_ket()

std::string ket_label(const std::vector<Factor>& f) {
  std::string s = "ket(";
  for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + f[i];
  return s + ")";
}

ProductState make_state(std::string label, const std::vector<Factor>& f, const std::vector<PartySpec>& parties) {
  ProductState s{std::move(label), {}};
  for (std::size_t i = 0; i < f.size(); ++i) s.factors.push_back(local_ket(parties[i].dim, f[i]));
  return s;
}

std::vector<PartySpec> abc(int d) { return {{"A", d}, {"B", d}, {"C", d}}; }

std::vector<std::vector<Factor>> bennett_pairs() {
  return {{"0", "eta+"}, {"0", "eta-"}, {"eta+", "2"}, {"eta-", "2"}, {"2", "xi+"},
          {"2", "xi-"},  {"xi+", "0"},  {"xi-", "0"},  {"1", "1"}};
}

// The 46 computational triples of the set R, in listing order.
constexpr std::array<std::array<int, 3>, 46> kSetR{{
    {3, 0, 3}, {3, 1, 3}, {3, 2, 3}, {3, 3, 0}, {3, 3, 1}, {3, 3, 2}, {3, 3, 3}, {2, 0, 0}, {2, 0, 1}, {2, 0, 2},
    {2, 1, 0}, {2, 1, 1}, {2, 1, 2}, {2, 2, 0}, {2, 2, 1}, {2, 2, 2}, {2, 3, 0}, {2, 3, 1}, {2, 3, 2}, {2, 3, 3},
    {0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 1, 0}, {0, 1, 1}, {0, 1, 2}, {0, 2, 0}, {0, 2, 1}, {0, 2, 2}, {0, 3, 0},
    {0, 3, 1}, {0, 3, 2}, {0, 3, 3}, {1, 0, 0}, {1, 0, 1}, {1, 0, 2}, {1, 1, 0}, {1, 1, 1}, {1, 1, 2}, {1, 2, 0},
    {1, 2, 1}, {1, 2, 2}, {1, 3, 0}, {1, 3, 1}, {1, 3, 2}, {1, 3, 3},
}};

std::vector<std::vector<Factor>> factors_I_43() {
  std::vector<std::vector<Factor>> out;
  for (const auto& p : bennett_pairs()) out.push_back({"3", p[0], p[1]});
  for (const auto& p : bennett_pairs()) out.push_back({p[0], p[1], "3"});
  for (const auto& t : kSetR) out.push_back({std::to_string(t[0]), std::to_string(t[1]), std::to_string(t[2])});
  return out;
}

OrthoProductBasis from_factors(std::string name, std::vector<PartySpec> parties,
                               const std::vector<std::vector<Factor>>& rows) {
  std::vector<ProductState> states;
  for (const auto& f : rows) states.push_back(make_state(ket_label(f), f, parties));
  return OrthoProductBasis(std::move(name), std::move(parties), std::move(states));
}

const char* kSigns[2] = {"+", "-"};

}  // namespace

OrthoProductBasis bennett_npb_3x3() {
  return from_factors("bennett_33", {{"A", 3}, {"B", 3}}, bennett_pairs());
}

OrthoProductBasis basis_I_43() { return from_factors("B_I_43", abc(4), factors_I_43()); }

OrthoProductBasis basis_II_43() {
  const std::set<std::vector<Factor>> removed{
      {"0", "3", "2"}, {"0", "3", "3"}, {"2", "2", "2"}, {"2", "3", "2"}, {"2", "3", "1"}, {"3", "3", "1"}};
  auto all = factors_I_43();
  std::vector<std::vector<Factor>> rows;
  std::size_t dropped = 0;
  for (auto& f : all) {
    if (removed.count(f)) ++dropped;
    else rows.push_back(std::move(f));
  }
  if (dropped != removed.size()) throw std::logic_error("removed states missing from the Type-I basis");
  for (auto s : kSigns) rows.push_back({"0", "3", std::string("chi") + s});
  for (auto s : kSigns) rows.push_back({"2", std::string("chi") + s, "2"});
  for (auto s : kSigns) rows.push_back({std::string("chi") + s, "3", "1"});
  return from_factors("B_II_43", abc(4), rows);
}

OrthoProductBasis basis_II_33() {
  // Each family has two twisted slots; the sign pair (s1, s2) fills them in order.
  const std::vector<std::array<std::string, 3>> families{
      {"0", "eta", "xi"}, {"eta", "2", "xi"}, {"2", "xi", "eta"},
      {"eta", "xi", "0"}, {"xi", "0", "eta"}, {"xi", "eta", "2"}};
  const auto parties = abc(3);
  std::vector<ProductState> states;
  for (std::size_t k = 0; k < families.size(); ++k)
    for (auto s1 : kSigns)
      for (auto s2 : kSigns) {
        const char* sg[2] = {s1, s2};
        int used = 0;
        std::vector<Factor> f;
        for (const auto& x : families[k]) f.push_back(x.size() == 1 ? x : x + sg[used++]);
        states.push_back(make_state("psi(" + std::string(s1) + "," + s2 + ")_" + std::to_string(k + 1), f, parties));
      }
  for (int k = 0; k < 3; ++k) {
    const auto d = std::to_string(k);
    states.push_back(make_state("phi(" + d + ")", {d, d, d}, parties));
  }
  return OrthoProductBasis("B_II_33", parties, std::move(states));
}

OrthoProductBasis basis_IIb_33() {
  const std::vector<std::pair<std::string, std::vector<std::array<std::string, 3>>>> families{
      {"alpha", {{"0", "1", "eta"}, {"0", "2", "kappa"}, {"1", "2", "eta"}, {"2", "1", "kappa"}}},
      {"beta", {{"1", "eta", "0"}, {"2", "kappa", "0"}, {"2", "eta", "1"}, {"1", "kappa", "2"}}},
      {"gamma", {{"eta", "0", "1"}, {"kappa", "0", "2"}, {"eta", "1", "2"}, {"kappa", "2", "1"}}},
  };
  const auto parties = abc(3);
  std::vector<ProductState> states;
  for (const auto& [stem, rows] : families)
    for (std::size_t k = 0; k < rows.size(); ++k)
      for (auto s : kSigns) {
        std::vector<Factor> f;
        for (const auto& x : rows[k]) f.push_back(x.size() == 1 ? x : x + s);
        states.push_back(make_state(stem + "(" + s + ")_" + std::to_string(k + 1), f, parties));
      }
  for (int k = 0; k < 3; ++k) {
    const auto d = std::to_string(k);
    states.push_back(make_state("phi(" + d + ")", {d, d, d}, parties));
  }
  return OrthoProductBasis("B_IIb_33", parties, std::move(states));
}

OrthoProductBasis shift_upb_opb_222() {
  return from_factors("shift_upb_222", abc(2),
                      {{"0", "1", "eta+"}, {"0", "1", "eta-"}, {"1", "eta+", "0"}, {"1", "eta-", "0"},
                       {"eta+", "0", "1"}, {"eta-", "0", "1"}, {"0", "0", "0"}, {"1", "1", "1"}});
}

std::vector<std::string> builtin_basis_names() {
  return {"bennett_33", "B_I_43", "B_II_43", "B_II_33", "B_IIb_33", "shift_upb_222"};
}

OrthoProductBasis builtin_basis(std::string_view name) {
  if (name == "bennett_33") return bennett_npb_3x3();
  if (name == "B_I_43") return basis_I_43();
  if (name == "B_II_43") return basis_II_43();
  if (name == "B_II_33") return basis_II_33();
  if (name == "B_IIb_33") return basis_IIb_33();
  if (name == "shift_upb_222") return shift_upb_opb_222();
  throw std::out_of_range("unknown basis '" + std::string(name) + "'");
}

OrthoProductBasis permute_parties(const OrthoProductBasis& b, std::span<const std::size_t> order) {
  if (order.size() != b.parties().size()) throw std::invalid_argument("party permutation has the wrong length");
  std::vector<PartySpec> parties;
  for (auto i : order) parties.push_back(b.parties().at(i));
  std::vector<ProductState> states;
  for (const auto& s : b.states()) {
    ProductState t{s.label, {}};
    for (auto i : order) t.factors.push_back(s.factors[i]);
    states.push_back(std::move(t));
  }
  return OrthoProductBasis(b.name(), std::move(parties), std::move(states));
}

}  // namespace gnpb
