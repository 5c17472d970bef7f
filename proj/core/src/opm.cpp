#include "gnpb/opm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace gnpb {

namespace {

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd v(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) v.segment(i * b.size(), b.size()) = a(i) * b;
  return v;
}

std::vector<std::size_t> complement(const OrthoProductBasis& b, const std::vector<std::size_t>& idx) {
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < b.parties().size(); ++i)
    if (std::find(idx.begin(), idx.end(), i) == idx.end()) rest.push_back(i);
  return rest;
}

Eigen::VectorXcd factor_on(const OrthoProductBasis& b, std::size_t i, const std::vector<std::size_t>& parties) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Ones(1);
  for (auto p : parties) v = kron(v, b.states()[i].factors[p]);
  return v;
}

std::vector<std::size_t> group_indices(const OrthoProductBasis& b, std::span<const std::string> group) {
  std::vector<std::size_t> idx;
  for (const auto& g : group) {
    auto p = b.party_index(g);
    if (std::find(idx.begin(), idx.end(), p) != idx.end()) throw std::invalid_argument("party repeated in group");
    idx.push_back(p);
  }
  if (idx.empty()) throw std::invalid_argument("empty party group");
  return idx;
}

// Real d²-dimensional value of ⟨a|G_p|b⟩ for every coordinate p.
Eigen::VectorXcd coordinate_row(const Eigen::VectorXcd& a, const Eigen::VectorXcd& c, int d) {
  Eigen::VectorXcd row(d * d);
  Eigen::Index p = 0;
  for (int k = 0; k < d; ++k) row(p++) = std::conj(a(k)) * c(k);
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      const Complex akl = std::conj(a(k)) * c(l), alk = std::conj(a(l)) * c(k);
      row(p++) = akl + alk;
      row(p++) = Complex(0, 1) * (akl - alk);
    }
  return row;
}

struct Constraints {
  Eigen::MatrixXd rows;
  std::vector<std::pair<Eigen::VectorXcd, Eigen::VectorXcd>> pairs;
};

Constraints build_constraints(const OrthoProductBasis& b, const std::vector<std::size_t>& g, int d) {
  const auto rest = complement(b, g);
  const std::size_t n = b.size();
  std::vector<Eigen::VectorXcd> a(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = factor_on(b, i, g);
    r[i] = factor_on(b, i, rest);
  }
  Constraints c;
  std::vector<Eigen::VectorXcd> complex_rows;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      if (std::abs(r[i].dot(r[j])) <= kTol) continue;
      complex_rows.push_back(coordinate_row(a[i], a[j], d));
      c.pairs.emplace_back(a[i], a[j]);
    }
  c.rows.resize(static_cast<Eigen::Index>(2 * complex_rows.size()), d * d);
  for (std::size_t k = 0; k < complex_rows.size(); ++k) {
    c.rows.row(static_cast<Eigen::Index>(2 * k)) = complex_rows[k].real().transpose();
    c.rows.row(static_cast<Eigen::Index>(2 * k + 1)) = complex_rows[k].imag().transpose();
  }
  return c;
}

bool satisfies(const Constraints& c, const Eigen::MatrixXcd& e, double tol) {
  for (const auto& [a, b] : c.pairs)
    if (std::abs(a.dot(e * b)) > tol) return false;
  return true;
}

}  // namespace

Eigen::VectorXd hermitian_coordinates(const Eigen::MatrixXcd& h) {
  const auto d = static_cast<int>(h.rows());
  Eigen::VectorXd x(d * d);
  Eigen::Index p = 0;
  for (int k = 0; k < d; ++k) x(p++) = h(k, k).real();
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      // With G = E_kl+E_lk and G' = i(E_kl-E_lk), h_kl = x_G + i·x_G'.
      x(p++) = h(k, l).real();
      x(p++) = h(k, l).imag();
    }
  return x;
}

Eigen::MatrixXcd hermitian_from_coordinates(const Eigen::VectorXd& x, int d) {
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  Eigen::Index p = 0;
  for (int k = 0; k < d; ++k) h(k, k) = x(p++);
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l) {
      const Complex z(x(p), x(p + 1));
      p += 2;
      h(k, l) = z;
      h(l, k) = std::conj(z);
    }
  return h;
}

Eigen::VectorXcd group_factor(const OrthoProductBasis& b, std::size_t i, std::span<const std::string> group) {
  return factor_on(b, i, group_indices(b, group));
}

bool HermitianSolutionSpace::contains(const Eigen::MatrixXcd& m, double tol) const {
  if (m.rows() != local_dim || !is_hermitian(m, tol)) return false;
  const Eigen::VectorXd x = hermitian_coordinates(m);
  if (basis_matrices.empty()) return x.norm() < tol;
  Eigen::MatrixXd cols(x.size(), static_cast<Eigen::Index>(basis_matrices.size()));
  for (std::size_t k = 0; k < basis_matrices.size(); ++k)
    cols.col(static_cast<Eigen::Index>(k)) = hermitian_coordinates(basis_matrices[k]);
  const Eigen::VectorXd coef = cols.colPivHouseholderQr().solve(x);
  return (cols * coef - x).norm() <= tol * std::max(1.0, x.norm());
}

HermitianSolutionSpace opm_solution_space(const OrthoProductBasis& b, std::span<const std::string> group) {
  const auto g = group_indices(b, group);
  int d = 1;
  for (auto p : g) d *= b.parties()[p].dim;
  const auto c = build_constraints(b, g, d);

  HermitianSolutionSpace s;
  s.group.assign(group.begin(), group.end());
  s.local_dim = d;
  s.constraint_rows = static_cast<std::size_t>(c.rows.rows());

  Eigen::BDCSVD<Eigen::MatrixXd> svd(c.rows.rows() ? c.rows : Eigen::MatrixXd::Zero(1, d * d), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (smax > 0 && sv(i) > kRankCut * smax) ++rank;
  const Eigen::MatrixXd& v = svd.matrixV();
  for (Eigen::Index k = rank; k < v.cols(); ++k) s.basis_matrices.push_back(hermitian_from_coordinates(v.col(k), d));
  return s;
}

bool is_locally_irreducible(const OrthoProductBasis& b, const PartyPartition& p) {
  for (const auto& g : p.groups)
    if (opm_solution_space(b, g).dim() > 1) return false;
  return true;
}

namespace {

std::vector<Eigen::MatrixXcd> eigenprojectors(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  const auto& w = es.eigenvalues();
  const auto& u = es.eigenvectors();
  std::vector<Eigen::MatrixXcd> out;
  Eigen::Index start = 0;
  for (Eigen::Index i = 1; i <= w.size(); ++i) {
    if (i < w.size() && std::abs(w(i) - w(start)) < 1e-6) continue;
    const Eigen::MatrixXcd block = u.middleCols(start, i - start);
    out.push_back(block * block.adjoint());
    start = i;
  }
  return out;
}

std::optional<Measurement> try_grouping(const OrthoProductBasis& b, const std::vector<std::size_t>& g,
                                        std::span<const std::string> group, const Constraints& c,
                                        const std::vector<Eigen::MatrixXcd>& effects) {
  for (const auto& e : effects)
    if (!satisfies(c, e, kRankCut)) return std::nullopt;
  const auto rest = complement(b, g);
  Measurement m;
  m.group.assign(group.begin(), group.end());
  m.effects = effects;
  bool eliminates = false;
  for (const auto& e : effects) {
    std::vector<std::string> alive;
    for (std::size_t i = 0; i < b.size(); ++i) {
      const auto a = factor_on(b, i, g);
      if (a.dot(e * a).real() > kTol) alive.push_back(b.states()[i].label);
    }
    if (alive.size() < b.size()) eliminates = true;
    m.survivors.push_back(std::move(alive));
  }
  if (!eliminates) return std::nullopt;
  return m;
}

}  // namespace

std::optional<Measurement> find_eliminating_opm(const OrthoProductBasis& b, std::span<const std::string> group) {
  const auto space = opm_solution_space(b, group);
  if (space.dim() <= 1) return std::nullopt;
  const auto g = group_indices(b, group);
  const int d = space.local_dim;
  const auto c = build_constraints(b, g, d);
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(d, d);

  std::vector<Eigen::MatrixXcd> traceless;
  for (const auto& h : space.basis_matrices) {
    Eigen::MatrixXcd t = h - (h.trace() / static_cast<double>(d)) * id;
    if (t.norm() > 1e-6) traceless.push_back(t);
  }
  // Candidates: each basis direction alone, then fixed-seed generic combinations.
  std::vector<Eigen::MatrixXcd> candidates = traceless;
  std::mt19937 rng(20240611u);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 8; ++trial) {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& t : traceless) h += normal(rng) * t;
    candidates.push_back(h);
  }

  for (const auto& h : candidates) {
    const auto projs = eigenprojectors(0.5 * (h + h.adjoint()));
    if (projs.size() < 2) continue;
    if (auto m = try_grouping(b, g, group, c, projs)) return m;
    // Coarser groupings: every two-block split of the eigenspaces.
    if (projs.size() > 12) continue;
    const std::size_t k = projs.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << (k - 1)); ++mask) {
      Eigen::MatrixXcd p0 = Eigen::MatrixXcd::Zero(d, d);
      for (std::size_t j = 0; j < k; ++j)
        if (mask & (std::size_t{1} << j)) p0 += projs[j];
      if (auto m = try_grouping(b, g, group, c, {p0, id - p0})) return m;
    }
  }
  return std::nullopt;
}

std::string_view type_name(GnpbType t) {
  switch (t) {
    case GnpbType::TypeI: return "TypeI";
    case GnpbType::TypeIIa: return "TypeIIa";
    case GnpbType::TypeIIb: return "TypeIIb";
  }
  return "?";
}

bool GnpbClassification::all_separated_reducible() const {
  return std::all_of(singles.begin(), singles.end(), [](const auto& g) { return g.reducible; });
}

bool GnpbClassification::any_pair_reducible() const {
  return std::any_of(pairs.begin(), pairs.end(), [](const auto& g) { return g.reducible; });
}

GnpbClassification classify(const OrthoProductBasis& b) {
  if (b.parties().size() != 3) throw std::invalid_argument("classification needs exactly three parties");
  const auto& p = b.parties();
  auto verdict_for = [&](std::vector<std::string> group) {
    GroupVerdict v;
    v.solution_dim = opm_solution_space(b, group).dim();
    v.reducible = v.solution_dim > 1;
    if (v.reducible) v.witness = find_eliminating_opm(b, group);
    v.group = std::move(group);
    return v;
  };
  GnpbClassification c;
  c.basis = b.name();
  for (const auto& party : p) c.singles.push_back(verdict_for({party.name}));
  c.pairs.push_back(verdict_for({p[0].name, p[1].name}));
  c.pairs.push_back(verdict_for({p[1].name, p[2].name}));
  c.pairs.push_back(verdict_for({p[0].name, p[2].name}));
  const bool single = std::any_of(c.singles.begin(), c.singles.end(), [](const auto& g) { return g.reducible; });
  c.verdict = single ? GnpbType::TypeI : (c.any_pair_reducible() ? GnpbType::TypeIIa : GnpbType::TypeIIb);
  return c;
}

std::string describe_projector(const Eigen::MatrixXcd& p) {
  const auto d = p.rows();
  const bool diagonal = (p - Eigen::MatrixXcd(p.diagonal().asDiagonal())).cwiseAbs().maxCoeff() < 1e-6;
  if (diagonal) {
    std::vector<Eigen::Index> on, off;
    for (Eigen::Index k = 0; k < d; ++k) (std::abs(p(k, k) - 1.0) < 1e-6 ? on : off).push_back(k);
    auto sum = [](const std::vector<Eigen::Index>& ks) {
      std::string s;
      for (std::size_t i = 0; i < ks.size(); ++i) s += (i ? "+" : "") + ("|" + std::to_string(ks[i]) + "><" + std::to_string(ks[i]) + "|");
      return s;
    };
    if (off.empty()) return "I";
    if (on.size() <= off.size()) return sum(on);
    return off.size() == 1 ? "I-" + sum(off) : "I-(" + sum(off) + ")";
  }
  const auto rank = static_cast<long>(std::lround(p.trace().real()));
  return "rank-" + std::to_string(rank) + " projector";
}

std::string classification_to_json(const GnpbClassification& c, int indent) {
  using nlohmann::json;
  auto group_json = [](const GroupVerdict& g) {
    std::string name;
    for (const auto& s : g.group) name += s;
    json j{{"group", name}, {"solution_dim", g.solution_dim}, {"reducible", g.reducible}};
    if (g.witness) {
      json effects = json::array();
      for (std::size_t k = 0; k < g.witness->effects.size(); ++k)
        effects.push_back({{"projector", describe_projector(g.witness->effects[k])},
                           {"rank", std::lround(g.witness->effects[k].trace().real())},
                           {"survivors", g.witness->survivors[k]}});
      j["witness"] = effects;
    } else {
      j["witness"] = nullptr;
    }
    return j;
  };
  json doc;
  doc["basis"] = c.basis;
  doc["singles"] = json::array();
  for (const auto& g : c.singles) doc["singles"].push_back(group_json(g));
  doc["pairs"] = json::array();
  for (const auto& g : c.pairs) doc["pairs"].push_back(group_json(g));
  doc["verdict"] = std::string(type_name(c.verdict));
  return doc.dump(indent);
}

}  // namespace gnpb
